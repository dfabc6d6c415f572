"""Prime generation, counting and decade caching.

The sieve is segmented and odd-only: each segment is a numpy boolean mask
over the odd integers of the segment, cleared with strided slices for every
base prime up to the square root of the range end. Segments are independent,
so they may be sieved on worker threads; results are concatenated in
segment order, which keeps the output identical for any segment size or
worker count.
"""

import logging
import math
import operator
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterator, List, Optional, Tuple, Union

import numpy as np

from .config import Settings
from .errors import CacheIntegrityError, InputValidationError, RangeTooLargeError
from .prime_cache import PrimeCache

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class PrimeRun:
    """Ascending primes p with lo <= p < hi."""

    lo: int
    hi: int
    primes: np.ndarray

    def __post_init__(self):
        primes = np.array(self.primes, dtype=np.int64)
        primes.flags.writeable = False
        object.__setattr__(self, "primes", primes)

    def __len__(self) -> int:
        return len(self.primes)

    def __iter__(self) -> Iterator[int]:
        return iter(self.primes.tolist())

    @property
    def count(self) -> int:
        return len(self.primes)

    @property
    def first(self) -> Optional[int]:
        return int(self.primes[0]) if len(self.primes) else None

    @property
    def last(self) -> Optional[int]:
        return int(self.primes[-1]) if len(self.primes) else None

    def between(self, lo: int, hi: int) -> "PrimeRun":
        """Sub-run of the primes in [lo, hi), clipped to this run's bounds."""
        lo, hi = max(lo, self.lo), min(hi, self.hi)
        if lo >= hi:
            return PrimeRun(lo, lo, np.empty(0, dtype=np.int64))
        i, j = np.searchsorted(self.primes, [lo, hi], side="left")
        return PrimeRun(lo, hi, self.primes[i:j])


@dataclass(frozen=True, order=True)
class IpotInterval:
    """The decade [10^n, 10^(n+1)) between two adjacent integral powers of ten."""

    n: int

    def __post_init__(self):
        if isinstance(self.n, bool) or operator.index(self.n) < 0:
            raise InputValidationError(f"decade exponent must be a non-negative integer, got {self.n!r}")
        object.__setattr__(self, "n", operator.index(self.n))

    @property
    def lo(self) -> int:
        return 10**self.n

    @property
    def hi(self) -> int:
        return 10 ** (self.n + 1)

    def digit_bounds(self, d: int) -> Tuple[int, int]:
        """Sub-interval [d*10^n, (d+1)*10^n) where leading digit d applies."""
        check_digit(d)
        return d * 10**self.n, (d + 1) * 10**self.n

    def __str__(self) -> str:
        return f"[10^{self.n}, 10^{self.n + 1})"


def check_digit(d: int) -> int:
    if isinstance(d, bool) or not isinstance(d, (int, np.integer)) or not 1 <= d <= 9:
        raise InputValidationError(f"digit must be an integer in 1..9, got {d!r}")
    return int(d)


def simple_sieve(limit: int) -> np.ndarray:
    """All primes <= limit from a plain (unsegmented) sieve."""
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return np.flatnonzero(flags).astype(np.int64)


def is_prime(x: int) -> bool:
    """Deterministic trial division by 2, 3 and every 6k +/- 1 up to sqrt(x)."""
    x = operator.index(x)
    if x < 2:
        return False
    if x < 4:
        return True
    if x % 2 == 0 or x % 3 == 0:
        return False
    limit = math.isqrt(x)
    f = 5
    while f <= limit:
        if x % f == 0 or x % (f + 2) == 0:
            return False
        f += 6
    return True


def _sieve_segment(seg_lo: int, seg_hi: int, base: np.ndarray) -> np.ndarray:
    # seg_lo is odd; slot i stands for seg_lo + 2*i
    mask = np.ones((seg_hi - seg_lo + 1) // 2, dtype=bool)
    limit = math.isqrt(seg_hi - 1)
    for p in base[: np.searchsorted(base, limit, side="right")].tolist():
        start = max(p * p, -(-seg_lo // p) * p)
        if start % 2 == 0:
            start += p
        if start < seg_hi:
            mask[(start - seg_lo) // 2 :: p] = False
    return seg_lo + 2 * np.flatnonzero(mask).astype(np.int64)


class PrimeEngine:
    """Serves prime runs, prime counts and decades within a fixed capacity.

    Decades are memoized in memory and, when a cache directory is
    configured, persisted through PrimeCache.
    """

    def __init__(self, settings: Optional[Settings] = None):
        self.settings = settings or Settings.from_env()
        self.cache = PrimeCache(self.settings.cache_dir) if self.settings.cache_dir else None
        self._decades = {}

    @property
    def capacity(self) -> int:
        return self.settings.capacity

    def check_capacity(self, hi: int, hint: str = ""):
        if hi > self.capacity:
            raise RangeTooLargeError(hi, self.capacity, hint)

    def sieve_range(self, lo: int, hi: int) -> PrimeRun:
        """
        All primes in [lo, hi).

        Raises:
            InputValidationError: If lo < 2 or lo >= hi
            RangeTooLargeError: If hi exceeds the capacity
        """
        lo, hi = operator.index(lo), operator.index(hi)
        if lo < 2 or lo >= hi:
            raise InputValidationError(f"sieve range needs 2 <= lo < hi, got [{lo}, {hi})")
        self.check_capacity(hi)
        return PrimeRun(lo, hi, self._sieve(lo, hi))

    def primes_upto(self, x: int) -> PrimeRun:
        """All primes p <= x."""
        x = operator.index(x)
        self.check_capacity(x)
        if x < 2:
            return PrimeRun(2, 2, np.empty(0, dtype=np.int64))
        return PrimeRun(2, x + 1, self._sieve(2, x + 1))

    def prime_count(self, x: int) -> int:
        """pi(x), the number of primes <= x."""
        return len(self.primes_upto(x))

    def decade_primes(self, interval: Union[IpotInterval, int]) -> PrimeRun:
        """
        Primes of the decade [10^n, 10^(n+1)).

        Args:
            interval: The decade, or its exponent n

        Raises:
            RangeTooLargeError: If 10^(n+1) exceeds the capacity
            CacheIntegrityError: If the cached copy is corrupt and refresh is off
        """
        if not isinstance(interval, IpotInterval):
            interval = IpotInterval(interval)
        n = interval.n
        if n in self._decades:
            return self._decades[n]
        self.check_capacity(
            interval.hi,
            "decades beyond the capacity are only available to the estimators in density_analysis",
        )

        primes = self._load_cached(n)
        if primes is None:
            primes = self._sieve(max(interval.lo, 2), interval.hi)
            if self.cache is not None:
                self.cache.store(n, primes)

        run = PrimeRun(interval.lo, interval.hi, primes)
        self._decades[n] = run
        return run

    def _load_cached(self, n: int) -> Optional[np.ndarray]:
        if self.cache is None:
            return None
        try:
            return self.cache.load(n)
        except CacheIntegrityError as e:
            if not self.settings.refresh_cache:
                raise CacheIntegrityError(f"{e} (rerun with --refresh-cache to recompute it)")
            logger.warning("recomputing decade %d after cache failure: %s", n, e)
            return None

    def _sieve(self, lo: int, hi: int) -> np.ndarray:
        parts: List[np.ndarray] = []
        if lo <= 2 < hi:
            parts.append(np.array([2], dtype=np.int64))

        start = max(lo, 3) | 1
        if start < hi:
            base = simple_sieve(math.isqrt(hi - 1))[1:]
            span = max(2, self.settings.segment_size - self.settings.segment_size % 2)
            bounds = [(a, min(a + span, hi)) for a in range(start, hi, span)]
            logger.debug("sieving [%d, %d) in %d segments", lo, hi, len(bounds))

            if self.settings.workers > 1 and len(bounds) > 1:
                with ThreadPoolExecutor(max_workers=self.settings.workers) as pool:
                    parts.extend(pool.map(lambda b: _sieve_segment(b[0], b[1], base), bounds))
            else:
                parts.extend(_sieve_segment(a, b, base) for a, b in bounds)

        if not parts:
            return np.empty(0, dtype=np.int64)
        return np.concatenate(parts)


_default_engine: Optional[PrimeEngine] = None


def get_engine() -> PrimeEngine:
    """Process-wide engine built from the environment on first use."""
    global _default_engine
    if _default_engine is None:
        _default_engine = PrimeEngine(Settings.from_env())
    return _default_engine


def sieve_range(lo: int, hi: int, engine: Optional[PrimeEngine] = None) -> PrimeRun:
    return (engine or get_engine()).sieve_range(lo, hi)


def prime_count(x: int, engine: Optional[PrimeEngine] = None) -> int:
    return (engine or get_engine()).prime_count(x)


def decade_primes(interval: Union[IpotInterval, int], engine: Optional[PrimeEngine] = None) -> PrimeRun:
    return (engine or get_engine()).decade_primes(interval)
