"""
Leading-digit extraction, digit tallies and conformance against reference laws.

Leading digits of real values are read from the decimal form of the value
(the shortest round-tripping repr for floats), never from a floating-point
log10, so exact powers of ten are never misclassified. Integer arrays such
as prime runs take a vectorized path over a table of powers of ten.

Usage:
    from prime_digits.digit_analysis import digit_tally, to_proportions, ssd, benford_vector
    observed = to_proportions(digit_tally(values))
    print(ssd(observed, benford_vector()))
"""

import logging
import math
import numbers
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from enum import Enum
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import EmptyDatasetError, InputValidationError, MetricInputError, UndefinedDigitError
from .numeric import round_half_away
from .prime_engine import PrimeEngine, PrimeRun, check_digit, decade_primes, sieve_range

logger = logging.getLogger(__name__)

DIGITS = tuple(range(1, 10))
_POWERS_OF_TEN = 10 ** np.arange(19, dtype=np.int64)


class VectorKind(str, Enum):
    COUNTS = "counts"
    PROPORTIONS = "proportions"


@dataclass(frozen=True)
class DigitVector:
    """Nine values indexed by leading digit 1..9."""

    values: Tuple[float, ...]
    kind: VectorKind

    def __post_init__(self):
        kind = VectorKind(self.kind)
        raw = list(self.values)
        if len(raw) != 9:
            raise InputValidationError(f"a digit vector needs 9 entries, got {len(raw)}")
        if any(v < 0 or not math.isfinite(v) for v in raw):
            raise InputValidationError(f"digit vector entries must be finite and non-negative: {raw}")

        if kind is VectorKind.COUNTS:
            if any(v != int(v) for v in raw):
                raise InputValidationError(f"count vectors hold integers only: {raw}")
            values = tuple(int(v) for v in raw)
        else:
            values = tuple(float(v) for v in raw)
            total = math.fsum(values)
            if total != 0 and abs(total - 1) > 1e-12:
                raise InputValidationError(f"proportions must sum to 1, got {total!r}")

        object.__setattr__(self, "values", values)
        object.__setattr__(self, "kind", kind)

    @classmethod
    def from_percent(cls, percents: Sequence[float]) -> "DigitVector":
        """Proportions from a table of percentages, renormalized to sum to 1.

        Published tables round each entry, so their rows rarely add to 100.
        """
        total = math.fsum(percents)
        return cls(tuple(p / total for p in percents), VectorKind.PROPORTIONS)

    def __getitem__(self, d: int) -> float:
        return self.values[check_digit(d) - 1]

    def __iter__(self):
        return iter(self.values)

    @property
    def total(self) -> float:
        return math.fsum(self.values) if self.kind is VectorKind.PROPORTIONS else sum(self.values)

    def percent(self, places: Optional[int] = None) -> List[float]:
        """Entries as percentages, optionally rounded half away from zero."""
        values = [100 * v for v in self.values]
        return [round_half_away(v, places) for v in values] if places is not None else values


@dataclass(frozen=True)
class DatasetSample:
    """Finite nonzero values parsed from a dataset, plus the rejected-record count."""

    values: Tuple[float, ...]
    skipped: int = 0

    def __len__(self) -> int:
        return len(self.values)


def leading_digit(v: Union[numbers.Real, Decimal]) -> int:
    """
    First significant digit of |v|.

    Args:
        v: A finite nonzero real

    Returns:
        Digit in 1..9

    Raises:
        UndefinedDigitError: If v is zero or not finite
    """
    if isinstance(v, numbers.Integral):
        value = Decimal(int(v))
    elif isinstance(v, Decimal):
        value = v
    else:
        try:
            f = float(v)
        except (TypeError, ValueError):
            raise UndefinedDigitError(f"no leading digit for non-numeric value {v!r}")
        if not math.isfinite(f):
            raise UndefinedDigitError(f"no leading digit for non-finite value {v!r}")
        value = Decimal(repr(f))

    if not value.is_finite() or value.is_zero():
        raise UndefinedDigitError(f"no leading digit for {v!r}")
    return next(d for d in value.as_tuple().digits if d)


def leading_digits(values: Union[np.ndarray, PrimeRun]) -> np.ndarray:
    """Vectorized leading digits of a nonzero integer array."""
    if isinstance(values, PrimeRun):
        values = values.primes
    v = np.abs(np.asarray(values, dtype=np.int64))
    if v.size and not v.all():
        raise UndefinedDigitError("zero has no leading digit")
    exponent = np.searchsorted(_POWERS_OF_TEN, v, side="right") - 1
    return v // _POWERS_OF_TEN[exponent]


def digit_tally(values: Union[Iterable[numbers.Real], np.ndarray, PrimeRun, DatasetSample]) -> DigitVector:
    """Count how many values start with each digit 1..9."""
    if isinstance(values, DatasetSample):
        values = values.values
    if isinstance(values, PrimeRun) or (isinstance(values, np.ndarray) and values.dtype.kind in "iu"):
        digits = leading_digits(values)
    else:
        digits = np.array([leading_digit(v) for v in values], dtype=np.int64)
    counts = np.bincount(digits, minlength=10)[1:] if len(digits) else np.zeros(9, dtype=np.int64)
    return DigitVector(tuple(counts.tolist()), VectorKind.COUNTS)


def to_proportions(tally: DigitVector) -> DigitVector:
    """Divide counts by their total; an empty tally stays all zero."""
    if tally.kind is VectorKind.PROPORTIONS:
        return tally
    total = sum(tally.values)
    if total == 0:
        return DigitVector((0.0,) * 9, VectorKind.PROPORTIONS)
    return DigitVector(tuple(c / total for c in tally.values), VectorKind.PROPORTIONS)


def benford_vector() -> DigitVector:
    """log10(1 + 1/d) for d = 1..9."""
    return DigitVector(tuple(math.log10(1 + 1 / d) for d in DIGITS), VectorKind.PROPORTIONS)


def uniform_vector() -> DigitVector:
    return DigitVector((1 / 9,) * 9, VectorKind.PROPORTIONS)


def ssd(observed: DigitVector, reference: DigitVector) -> float:
    """
    Sum of squared deviations in percentage points squared.

    Raises:
        MetricInputError: If either vector holds counts
    """
    for name, vector in (("observed", observed), ("reference", reference)):
        if vector.kind is not VectorKind.PROPORTIONS:
            raise MetricInputError(f"{name} vector must hold proportions, got {vector.kind.value}")
    return math.fsum((100 * o - 100 * r) ** 2 for o, r in zip(observed.values, reference.values))


def ingest_dataset(raw: Iterable[str]) -> DatasetSample:
    """
    Parse numeric text records, rejecting zeros, non-numbers and non-finite values.

    Comma thousands separators are stripped; '.' is the only decimal point.
    """
    values = []
    skipped = 0
    for record in raw:
        text = str(record).strip().replace(",", "")
        try:
            value = float(Decimal(text))
        except (InvalidOperation, ValueError):
            skipped += 1
            continue
        if value == 0 or not math.isfinite(value):
            skipped += 1
            continue
        values.append(value)

    if skipped:
        logger.info("skipped %d of %d dataset records", skipped, skipped + len(values))
    return DatasetSample(tuple(values), skipped)


def read_dataset(path: Union[str, Path]) -> DatasetSample:
    """
    Read a one-value-per-line dataset file. Blank lines are ignored.

    Raises:
        InputValidationError: If the file cannot be read
        EmptyDatasetError: If no usable value remains
    """
    try:
        with open(path, "r", encoding="utf-8") as f:
            lines = [line for line in f if line.strip()]
    except (OSError, UnicodeDecodeError) as e:
        raise InputValidationError(f"cannot read dataset {path}: {e}")

    sample = ingest_dataset(lines)
    if not sample.values:
        raise EmptyDatasetError(f"{path} holds no finite nonzero values ({sample.skipped} records rejected)")
    return sample


def prime_digit_table(lo: int, hi: int, engine: Optional[PrimeEngine] = None) -> DigitVector:
    """Leading-digit proportions of the primes in [lo, hi)."""
    return to_proportions(digit_tally(sieve_range(lo, hi, engine)))


def decade_digit_proportions(n: int, engine: Optional[PrimeEngine] = None) -> DigitVector:
    """Leading-digit proportions of the primes in [10^n, 10^(n+1))."""
    return to_proportions(digit_tally(decade_primes(n, engine)))
