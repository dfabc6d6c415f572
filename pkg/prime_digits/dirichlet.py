"""
Reciprocal power sums over prime subsets and the digit densities built on them.

The Modified Dirichlet Density of digit d in decade n is the s = 1 reciprocal
sum over the decade's primes that start with d, divided by the reciprocal
sum over all of the decade's primes. All sums use math.fsum, which is
correctly rounded and therefore independent of term order.
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import special

from .digit_analysis import DIGITS, DigitVector, VectorKind, benford_vector, leading_digits, ssd
from .errors import DomainError, InputValidationError, InsufficientPrimesError
from .numeric import adaptive_simpson
from .prime_engine import IpotInterval, PrimeEngine, PrimeRun, check_digit, get_engine, is_prime

logger = logging.getLogger(__name__)

LOG10_E = math.log10(math.e)
BEYOND_CAPACITY_HINT = "use mdd_theoretical for decades beyond the sieve capacity"


@dataclass(frozen=True)
class MddTable:
    n: int
    ratios: DigitVector
    ssd_vs_benford: float


@dataclass(frozen=True)
class SweepPoint:
    d: int
    s: float
    x_max: int
    ratio: float


@dataclass(frozen=True)
class MersenneRatio:
    x_max: int
    s: float
    mersenne_primes: Tuple[int, ...]
    ratio: float
    naive_frequency: float

    @property
    def mersenne_count(self) -> int:
        return len(self.mersenne_primes)


def _check_power(s: float) -> float:
    if not s >= 1:
        raise DomainError(f"reciprocal sums need s >= 1, got {s}")
    return float(s)


def _reciprocal_terms(primes: np.ndarray, s: float) -> np.ndarray:
    values = np.asarray(primes, dtype=float)
    return 1 / values if s == 1 else np.power(values, -s)


def reciprocal_power_sum(primes: Union[PrimeRun, Sequence[int]], s: float = 1.0) -> float:
    """
    Sum of 1/p^s over the given primes.

    Args:
        primes: A PrimeRun, or an explicit list that is checked for primality
        s: Power, at least 1

    Raises:
        InputValidationError: If an explicit element is not prime
    """
    s = _check_power(s)
    if isinstance(primes, PrimeRun):
        values = primes.primes
    else:
        values = list(primes)
        composites = [p for p in values if not is_prime(p)]
        if composites:
            raise InputValidationError(f"reciprocal power sums take primes only, got {composites[:5]}")
    if len(values) == 0:
        return 0.0
    return math.fsum(_reciprocal_terms(values, s).tolist())


def _digit_sums(run: PrimeRun, s: float) -> Tuple[List[float], float]:
    terms = _reciprocal_terms(run.primes, s)
    digits = leading_digits(run) if len(run) else np.empty(0, dtype=np.int64)
    per_digit = [math.fsum(terms[digits == d].tolist()) for d in DIGITS]
    return per_digit, math.fsum(terms.tolist())


def _decade_run(n: int, engine: Optional[PrimeEngine]) -> PrimeRun:
    engine = engine or get_engine()
    engine.check_capacity(IpotInterval(n).hi, BEYOND_CAPACITY_HINT)
    return engine.decade_primes(n)


def mdd(n: int, d: int, engine: Optional[PrimeEngine] = None) -> float:
    """Modified Dirichlet Density of digit d in decade n."""
    check_digit(d)
    run = _decade_run(n, engine)
    numerator = reciprocal_power_sum(run.between(*IpotInterval(n).digit_bounds(d)))
    return numerator / reciprocal_power_sum(run)


def mdd_table(n: int, engine: Optional[PrimeEngine] = None) -> MddTable:
    """
    All nine MDD ratios of decade n with their SSD against Benford.

    Decade [1, 10) is excluded as an outlier, so n starts at 1.
    """
    if n < 1:
        raise InputValidationError(f"MDD tables start at decade 1, got {n}")
    per_digit, total = _digit_sums(_decade_run(n, engine), 1.0)
    ratios = DigitVector(tuple(v / total for v in per_digit), VectorKind.PROPORTIONS)
    return MddTable(n, ratios, ssd(ratios, benford_vector()))


def mdd_theoretical(d: int) -> float:
    """Limit of MDD(n, d) for large n: log10(1 + 1/d)."""
    return math.log10(1 + 1 / check_digit(d))


def kx_area(d: int) -> float:
    """Area under log10(e)/x over [d, d+1], integrated numerically."""
    d = check_digit(d)
    return adaptive_simpson(lambda x: LOG10_E / x, float(d), float(d + 1), rel_tol=1e-12)


def dirichlet_sweep(d: int, s_values: Sequence[float], x_max: int,
                    engine: Optional[PrimeEngine] = None) -> List[SweepPoint]:
    """
    Truncated Dirichlet ratios for digit d over all primes up to x_max.

    Raises:
        InsufficientPrimesError: If x_max < 2
        RangeTooLargeError: If x_max exceeds the capacity
    """
    check_digit(d)
    powers = [_check_power(s) for s in s_values]
    run = (engine or get_engine()).primes_upto(x_max)
    if run.count == 0:
        raise InsufficientPrimesError(f"no primes up to {x_max}")

    points = []
    for s in powers:
        per_digit, total = _digit_sums(run, s)
        points.append(SweepPoint(d, s, x_max, per_digit[d - 1] / total))
        logger.debug("sweep d=%d s=%g x_max=%d ratio=%.6f", d, s, x_max, points[-1].ratio)
    return points


def mersenne_primes_upto(x_max: int) -> List[int]:
    """Primes of the form 2^k - 1 not above x_max, by construction and trial division."""
    candidates = ((1 << k) - 1 for k in range(2, max(x_max, 1).bit_length() + 1))
    return [m for m in candidates if m <= x_max and is_prime(m)]


def mersenne_ratio(x_max: int, s: float = 1.0, engine: Optional[PrimeEngine] = None) -> MersenneRatio:
    """Reciprocal-sum share and naive frequency of Mersenne primes up to x_max."""
    s = _check_power(s)
    run = (engine or get_engine()).primes_upto(x_max)
    if run.count == 0:
        raise InsufficientPrimesError(f"no primes up to {x_max}")
    mersennes = mersenne_primes_upto(x_max)
    ratio = reciprocal_power_sum(mersennes, s) / reciprocal_power_sum(run, s)
    return MersenneRatio(x_max, s, tuple(mersennes), ratio, len(mersennes) / x_max)


def _harmonic_span(lo: int, hi: int) -> float:
    # sum of 1/z for lo <= z < hi
    return float(special.digamma(hi) - special.digamma(lo))


def integer_mdd(n: int, d: int, engine: Optional[PrimeEngine] = None) -> float:
    """Share of sum(1/z) over decade n's integers taken by those starting with d."""
    check_digit(d)
    interval = IpotInterval(n)
    (engine or get_engine()).check_capacity(interval.hi, BEYOND_CAPACITY_HINT)
    return _harmonic_span(*interval.digit_bounds(d)) / _harmonic_span(interval.lo, interval.hi)


def integer_mdd_table(n: int, engine: Optional[PrimeEngine] = None) -> MddTable:
    values = [integer_mdd(n, d, engine) for d in DIGITS]
    total = math.fsum(values)
    ratios = DigitVector(tuple(v / total for v in values), VectorKind.PROPORTIONS)
    return MddTable(n, ratios, ssd(ratios, benford_vector()))
