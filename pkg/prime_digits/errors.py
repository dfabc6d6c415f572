"""Exception hierarchy for the prime digit analysis package."""


class PrimeDigitsError(Exception):
    """Base class for every error raised by prime_digits."""


class RangeTooLargeError(PrimeDigitsError, ValueError):
    """A requested range, decade or window exceeds the sieve capacity."""

    def __init__(self, requested: int, capacity: int, hint: str = ""):
        self.requested = requested
        self.capacity = capacity
        self.hint = hint or "raise the capacity with --capacity or PRIME_DIGITS_CAPACITY"
        super().__init__(
            f"range end {requested:,} exceeds the configured sieve capacity of {capacity:,}; {self.hint}"
        )


class CacheIntegrityError(PrimeDigitsError):
    """A cached prime file or the cache manifest failed verification."""


class UndefinedDigitError(PrimeDigitsError, ValueError):
    """Zero and non-finite values have no leading digit."""


class DomainError(PrimeDigitsError, ValueError):
    """An estimator argument lies outside its mathematical domain."""


class InsufficientPrimesError(PrimeDigitsError, ValueError):
    """A range holds fewer primes than an operation needs."""


class MetricInputError(PrimeDigitsError, ValueError):
    """Conformance metrics only compare proportion vectors."""


class InputValidationError(PrimeDigitsError, ValueError):
    """Malformed arguments such as a non-prime in a reciprocal sum."""


class ConfigurationError(PrimeDigitsError, ValueError):
    """Invalid settings such as zero histogram bins."""


class EmptyDatasetError(PrimeDigitsError):
    """A dataset produced no usable values."""


class ReportEncodingError(PrimeDigitsError, ValueError):
    """A report value has no representation in strict JSON."""
