"""
Prime-number-theorem estimators and their empirical counterparts.

Closed-form estimators never materialize 10^n: every per-digit quantity is
evaluated through ln(d + 1/2) + n*ln(10), so decades far past the sieve
capacity (n = 144 and beyond) stay exact in relative terms. Empirical
values are attached only where the decade or window fits in the engine's
capacity.
"""

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from decimal import Decimal, localcontext
from enum import Enum
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import stats

from .digit_analysis import DIGITS, DigitVector, VectorKind, digit_tally
from .errors import (
    ConfigurationError,
    DomainError,
    InputValidationError,
    InsufficientPrimesError,
)
from .numeric import adaptive_simpson, round_to_integer
from .prime_engine import IpotInterval, PrimeEngine, check_digit, get_engine

logger = logging.getLogger(__name__)

LN10 = math.log(10)
LI_REL_TOL = 1e-9
# digits carried beyond the integer part of exact decade estimates
GUARD_DIGITS = 20


class DensitySubject(str, Enum):
    DIGIT_COUNTS = "digit_counts"
    DECADE_COUNTS = "decade_counts"
    GAPS = "gaps"
    GROWTH_FACTORS = "growth_factors"
    LOG_DENSITY_COUNTS = "log_density_counts"
    DENSITY_CURVE = "density_curve"
    LOG_DENSITY_CURVE = "log_density_curve"


@dataclass(frozen=True)
class DensityRow:
    label: str
    theoretical: Union[float, int]
    empirical: Optional[float] = None


@dataclass(frozen=True)
class DensityReport:
    """Paired theoretical and empirical values for one decade, window set or sweep."""

    subject: DensitySubject
    scope: str
    rows: Tuple[DensityRow, ...]

    @property
    def theoretical(self) -> List[Union[float, int]]:
        return [row.theoretical for row in self.rows]

    @property
    def empirical(self) -> Optional[List[Optional[float]]]:
        values = [row.empirical for row in self.rows]
        return values if any(v is not None for v in values) else None


@dataclass(frozen=True)
class WindowSpec:
    """`width` consecutive integers starting floor(width/2) below `center`."""

    center: int
    width: int

    def __post_init__(self):
        if self.width < 1:
            raise InputValidationError(f"window width must be positive, got {self.width}")
        if self.center < 0:
            raise InputValidationError(f"window center must be non-negative, got {self.center}")

    @property
    def bounds(self) -> Tuple[int, int]:
        lo = self.center - self.width // 2
        return lo, lo + self.width


@dataclass(frozen=True)
class CountingComparison:
    x: float
    prime_count: int
    li_count: float
    crude_count: float
    prime_density: float


def _engine(engine: Optional[PrimeEngine]) -> PrimeEngine:
    return engine or get_engine()


def _exponent(n: int) -> int:
    return IpotInterval(n).n


def _decade_in_capacity(n: int, engine: PrimeEngine) -> bool:
    return IpotInterval(n).hi <= engine.capacity


def _exact_precision(n: int) -> int:
    return n + GUARD_DIGITS


@lru_cache(maxsize=None)
def _exact_logs(precision: int) -> Tuple[Decimal, Tuple[Decimal, ...]]:
    """ln(10) and ln(d + 1/2) for every digit, to `precision` significant digits."""
    with localcontext() as ctx:
        ctx.prec = precision
        return Decimal(10).ln(), tuple((d + Decimal("0.5")).ln() for d in DIGITS)


def _logs_for(n: int) -> Tuple[Decimal, Tuple[Decimal, ...]]:
    # one log table per block of 256 digits of precision
    return _exact_logs(-(-_exact_precision(n) // 256) * 256)


def prime_density(x: float) -> float:
    """1/ln(x), the PNT point density near x."""
    if not x > 1:
        raise DomainError(f"prime_density needs x > 1, got {x}")
    return 1 / math.log(x)


def windowed_density(window: WindowSpec, engine: Optional[PrimeEngine] = None) -> float:
    """
    Share of primes among the window's integers; integers below 2 are never prime.

    Raises:
        RangeTooLargeError: If the window ends beyond the capacity
    """
    lo, hi = window.bounds
    engine = _engine(engine)
    engine.check_capacity(hi)
    if hi <= 2:
        return 0.0
    return engine.sieve_range(max(lo, 2), hi).count / window.width


def li_count(x: float) -> float:
    """Logarithmic integral from 2 to x by adaptive Simpson quadrature."""
    if not x >= 2:
        raise DomainError(f"li_count needs x >= 2, got {x}")
    x = float(x)
    # octave panels: [2, 4), [4, 8), ...
    breakpoints = []
    edge = 4.0
    while edge < x:
        breakpoints.append(edge)
        edge *= 2
    return adaptive_simpson(lambda t: 1 / math.log(t), 2.0, x, rel_tol=LI_REL_TOL, breakpoints=breakpoints)


def crude_count(x: float) -> float:
    """x/ln(x)."""
    if not x > math.e:
        raise DomainError(f"crude_count needs x > e, got {x}")
    return x / math.log(x)


def counting_comparison(x: int, engine: Optional[PrimeEngine] = None) -> CountingComparison:
    """pi(x) side by side with the integral, crude and point-density estimates."""
    return CountingComparison(
        x=x,
        prime_count=_engine(engine).prime_count(x),
        li_count=li_count(x),
        crude_count=crude_count(x),
        prime_density=prime_density(x),
    )


def average_gap_estimate(n: int, d: int) -> float:
    """ln((d + 1/2) * 10^n), the expected prime gap near the middle of digit d's span."""
    return math.log(check_digit(d) + 0.5) + _exponent(n) * LN10


def _digit_weights(n: int) -> List[float]:
    return [1 / average_gap_estimate(n, d) for d in DIGITS]


def digit_count_estimate(n: int, d: int) -> float:
    """
    Estimated prime count in [d*10^n, (d+1)*10^n), 10^n / ln((d + 1/2)*10^n).

    Decades whose count exceeds the float range report infinity.
    """
    gap = average_gap_estimate(n, d)
    try:
        return math.exp(n * LN10 - math.log(gap))
    except OverflowError:
        logger.debug("digit count estimate for n=%d overflows a float", n)
        return math.inf


def decade_count_estimate(n: int) -> float:
    return math.fsum(digit_count_estimate(n, d) for d in DIGITS)


def exact_digit_count_estimate(n: int, d: int) -> Decimal:
    """digit_count_estimate in Decimal, carrying every digit of the integer part for any n."""
    n, d = _exponent(n), check_digit(d)
    ln10, ln_mid = _logs_for(n)
    with localcontext() as ctx:
        ctx.prec = _exact_precision(n)
        return Decimal(10) ** n / (ln_mid[d - 1] + n * ln10)


def exact_decade_count_estimate(n: int) -> Decimal:
    n = _exponent(n)
    with localcontext() as ctx:
        ctx.prec = _exact_precision(n)
        return sum((exact_digit_count_estimate(n, d) for d in DIGITS), Decimal(0))


def reportable_digit_count(n: int, d: int) -> Union[float, int]:
    """digit_count_estimate, or its exact rounded value once the float overflows."""
    estimate = digit_count_estimate(n, d)
    return estimate if math.isfinite(estimate) else round_to_integer(exact_digit_count_estimate(n, d))


def digit_proportion_estimates(n: int) -> DigitVector:
    """Estimated digit proportions in decade n; 10^n cancels, so any n works."""
    weights = _digit_weights(n)
    total = math.fsum(weights)
    return DigitVector(tuple(w / total for w in weights), VectorKind.PROPORTIONS)


def growth_factor_estimate(n: int) -> float:
    """Estimated count ratio of decade n+1 to decade n."""
    return 10 * math.fsum(_digit_weights(n + 1)) / math.fsum(_digit_weights(n))


def growth_factors(n_max: int, engine: Optional[PrimeEngine] = None) -> DensityReport:
    """
    Decade-to-decade count ratios for steps n -> n+1, n = 0..n_max-1.

    Empirical ratios are attached while both decades fit in the capacity.
    """
    if n_max < 1:
        raise DomainError(f"growth_factors needs n_max >= 1, got {n_max}")
    engine = _engine(engine)
    rows = []
    for n in range(n_max):
        empirical = None
        if _decade_in_capacity(n + 1, engine):
            empirical = engine.decade_primes(n + 1).count / engine.decade_primes(n).count
        rows.append(DensityRow(f"{n}->{n + 1}", growth_factor_estimate(n), empirical))
    return DensityReport(DensitySubject.GROWTH_FACTORS, f"n=0..{n_max}", tuple(rows))


def digit_count_report(n: int, engine: Optional[PrimeEngine] = None) -> DensityReport:
    """Per-digit estimated counts in decade n with actual tallies where sievable."""
    engine = _engine(engine)
    tally = digit_tally(engine.decade_primes(n)) if _decade_in_capacity(n, engine) else None
    rows = tuple(
        DensityRow(str(d), reportable_digit_count(n, d), tally[d] if tally is not None else None)
        for d in DIGITS
    )
    return DensityReport(DensitySubject.DIGIT_COUNTS, str(IpotInterval(n)), rows)


def decade_count_report(n_max: int, engine: Optional[PrimeEngine] = None) -> DensityReport:
    """Rounded decade count estimates for n = 0..n_max next to actual counts."""
    engine = _engine(engine)
    rows = []
    for n in range(_exponent(n_max) + 1):
        empirical = engine.decade_primes(n).count if _decade_in_capacity(n, engine) else None
        rows.append(DensityRow(str(n), round_to_integer(exact_decade_count_estimate(n)), empirical))
    return DensityReport(DensitySubject.DECADE_COUNTS, f"n=0..{n_max}", tuple(rows))


def average_gap_empirical(lo: int, hi: int, engine: Optional[PrimeEngine] = None) -> float:
    """
    Mean distance between consecutive primes in [lo, hi), (p_last - p_first)/(count - 1).

    Raises:
        InsufficientPrimesError: If the range holds fewer than two primes
    """
    if hi <= max(lo, 2):
        raise InsufficientPrimesError(f"[{lo}, {hi}) holds no primes; a gap needs two")
    run = _engine(engine).sieve_range(max(lo, 2), hi)
    if run.count < 2:
        raise InsufficientPrimesError(f"[{lo}, {hi}) holds {run.count} prime(s); a gap needs two")
    return (run.last - run.first) / (run.count - 1)


def gap_table(n: int, engine: Optional[PrimeEngine] = None) -> DensityReport:
    """Estimated and observed average gaps for each digit's span in decade n."""
    engine = _engine(engine)
    interval = IpotInterval(n)
    rows = []
    for d in DIGITS:
        lo, hi = interval.digit_bounds(d)
        empirical = None
        if hi <= engine.capacity:
            try:
                empirical = average_gap_empirical(lo, hi, engine)
            except InsufficientPrimesError as e:
                logger.debug("no empirical gap for digit %d: %s", d, e)
        rows.append(DensityRow(str(d), average_gap_estimate(n, d), empirical))
    return DensityReport(DensitySubject.GAPS, str(interval), tuple(rows))


def log_density(x: float) -> float:
    """x/log10(x), primes per unit length of the log10 axis near x."""
    if not x > 1:
        raise DomainError(f"log_density needs x > 1, got {x}")
    return x / math.log10(x)


def midpoint_log_density(n: int) -> Decimal:
    """log_density at 10^(n + 1/2) in Decimal, where log10 is exactly n + 1/2."""
    n = _exponent(n)
    with localcontext() as ctx:
        ctx.prec = _exact_precision(n)
        return Decimal(10) ** n * Decimal(10).sqrt() / (n + Decimal("0.5"))


def finite_log_density(x: float, m: float) -> float:
    """M / (ln(x + M/2) * log10(1 + M/x)); tends to log_density(x) as M -> 0."""
    if not x > 1 or not m > 0:
        raise DomainError(f"finite_log_density needs x > 1 and m > 0, got x={x}, m={m}")
    return m / (math.log(x + m / 2) * (math.log1p(m / x) / LN10))


def log_density_counts(n_max: int, engine: Optional[PrimeEngine] = None) -> DensityReport:
    """log_density at each decade's log-midpoint 10^(n + 1/2), rounded, against actual counts."""
    engine = _engine(engine)
    rows = []
    for n in range(_exponent(n_max) + 1):
        theoretical = round_to_integer(midpoint_log_density(n))
        empirical = engine.decade_primes(n).count if _decade_in_capacity(n, engine) else None
        rows.append(DensityRow(str(n), theoretical, empirical))
    return DensityReport(DensitySubject.LOG_DENSITY_COUNTS, f"n=0..{n_max}", tuple(rows))


def _windows(lo: int, hi: int, width: int, engine: PrimeEngine):
    if width < 1:
        raise ConfigurationError(f"window width must be positive, got {width}")
    run = engine.sieve_range(lo, hi)
    starts = np.arange(lo, hi - width + 1, width, dtype=np.int64)
    counts = np.searchsorted(run.primes, starts + width) - np.searchsorted(run.primes, starts)
    return zip(starts.tolist(), counts.tolist())


def density_curve(lo: int, hi: int, width: int, engine: Optional[PrimeEngine] = None) -> DensityReport:
    """Windowed prime density over consecutive full windows in [lo, hi) against 1/ln(center)."""
    rows = tuple(
        DensityRow(str(start + width // 2), prime_density(start + width // 2), count / width)
        for start, count in _windows(lo, hi, width, _engine(engine))
    )
    return DensityReport(DensitySubject.DENSITY_CURVE, f"[{lo}, {hi}) width {width}", rows)


def log_density_curve(lo: int, hi: int, width: int, engine: Optional[PrimeEngine] = None) -> DensityReport:
    """Primes per unit of log10 span in each window against log_density(center)."""
    rows = []
    for start, count in _windows(lo, hi, width, _engine(engine)):
        span = math.log10(start + width) - math.log10(start)
        center = start + width // 2
        rows.append(DensityRow(str(center), log_density(center), count / span))
    return DensityReport(DensitySubject.LOG_DENSITY_CURVE, f"[{lo}, {hi}) width {width}", tuple(rows))


def histogram(values: Sequence[float], lo: float, hi: float, bins: int) -> List[int]:
    """
    Equal-width bin counts over [lo, hi); the last bin also takes hi.

    Raises:
        ConfigurationError: If bins is not a positive integer
    """
    if isinstance(bins, bool) or not isinstance(bins, (int, np.integer)) or bins < 1:
        raise ConfigurationError(f"histogram needs a positive bin count, got {bins!r}")
    if not lo < hi:
        raise InputValidationError(f"histogram needs lo < hi, got [{lo}, {hi})")
    counts, _ = np.histogram(np.asarray(values, dtype=float), bins=int(bins), range=(lo, hi))
    return counts.tolist()


def rank_trend(counts: Iterable[float]) -> float:
    """Spearman rank correlation between bin index and bin count."""
    counts = list(counts)
    rho, _ = stats.spearmanr(np.arange(len(counts)), counts)
    return float(rho)
