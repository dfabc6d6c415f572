#!/usr/bin/env python3
"""
Prime engine tests: sieve output, counting, decades and settings.

Usage:
    pytest prime_digits/tests/test_prime_engine.py -v
"""

import numpy as np
import pytest

from prime_digits.config import DEFAULT_CAPACITY, Settings
from prime_digits.errors import ConfigurationError, InputValidationError, RangeTooLargeError
from prime_digits.prime_engine import (
    IpotInterval,
    PrimeEngine,
    PrimeRun,
    decade_primes,
    is_prime,
    prime_count,
    sieve_range,
    simple_sieve,
)

DECADE_COUNTS = [4, 21, 143, 1061, 8363, 68906]


@pytest.fixture(scope="module")
def engine():
    """Engine capped at 10^6, the largest range the default suite sieves."""
    return PrimeEngine(Settings(capacity=10**6))


def test_sieve_range_two_digit_primes(engine):
    """The 21 primes from 11 to 97."""
    run = engine.sieve_range(10, 100)
    assert run.count == 21
    assert run.first == 11
    assert run.last == 97


def test_sieve_range_small_and_empty(engine):
    assert list(engine.sieve_range(2, 10)) == [2, 3, 5, 7]
    assert list(engine.sieve_range(3, 4)) == [3]
    assert engine.sieve_range(90, 97).count == 0
    assert engine.sieve_range(90, 97).first is None


def test_sieve_range_rejects_bad_bounds(engine):
    with pytest.raises(InputValidationError):
        engine.sieve_range(1, 10)
    with pytest.raises(InputValidationError):
        engine.sieve_range(50, 50)
    with pytest.raises(InputValidationError):
        engine.sieve_range(60, 50)


def test_sieve_range_beyond_capacity(engine):
    with pytest.raises(RangeTooLargeError) as exc_info:
        engine.sieve_range(2, 10**6 + 1)
    assert "1,000,000" in str(exc_info.value)
    assert exc_info.value.capacity == 10**6
    assert isinstance(exc_info.value, ValueError)


def test_sieve_matches_trial_division_oracle(engine):
    """Every integer in [2, 10^5) is classified the same way by sieve and oracle."""
    sieved = set(engine.sieve_range(2, 10**5))
    oracle = {x for x in range(2, 10**5) if is_prime(x)}
    assert sieved == oracle


def test_sieve_matches_oracle_on_random_subranges(engine):
    rng = np.random.default_rng(20240519)
    for _ in range(50):
        lo = int(rng.integers(2, 99_000))
        hi = lo + int(rng.integers(1, 1_000))
        expected = [x for x in range(lo, hi) if is_prime(x)]
        assert list(engine.sieve_range(lo, hi)) == expected, f"mismatch on [{lo}, {hi})"


def test_sieve_is_independent_of_segments_and_workers(engine):
    reference = engine.sieve_range(2, 300_000).primes
    for segment_size, workers in [(2, 1), (999, 1), (1000, 4), (2**12, 3), (2**20, 2)]:
        other = PrimeEngine(Settings(capacity=10**6, segment_size=segment_size, workers=workers))
        if segment_size == 2:
            run = other.sieve_range(2, 2_000)
            assert np.array_equal(run.primes, reference[reference < 2_000])
        else:
            assert np.array_equal(other.sieve_range(2, 300_000).primes, reference)


def test_sieve_range_output_is_ascending_and_in_bounds(engine):
    run = engine.sieve_range(123_457, 130_001)
    assert np.all(np.diff(run.primes) > 0)
    assert run.primes[0] >= 123_457
    assert run.primes[-1] < 130_001


def test_prime_run_is_immutable(engine):
    run = engine.sieve_range(10, 100)
    assert not run.primes.flags.writeable
    with pytest.raises(ValueError):
        run.primes[0] = 4
    with pytest.raises(AttributeError):
        run.lo = 3


def test_prime_run_between(engine):
    run = engine.decade_primes(1)
    assert list(run.between(10, 20)) == [11, 13, 17, 19]
    assert run.between(90, 99).count == 1
    assert run.between(200, 300).count == 0


@pytest.mark.parametrize("x,expected", [
    (373, True),
    (1709, True),
    (1, False),
    (0, False),
    (-7, False),
    (2, True),
    (3, True),
    (4, False),
    (25, False),
    (49, False),
    (524287, True),
    (8191 * 131071, False),
])
def test_is_prime(x, expected):
    assert is_prime(x) is expected


def test_is_prime_accepts_numpy_integers():
    assert is_prime(np.int64(97))
    with pytest.raises(TypeError):
        is_prime(7.0)


@pytest.mark.parametrize("x,expected", [(10**6, 78498), (1, 0), (0, 0), (2, 1), (100, 25), (10**4, 1229)])
def test_prime_count(engine, x, expected):
    assert engine.prime_count(x) == expected


def test_prime_count_beyond_capacity(engine):
    with pytest.raises(RangeTooLargeError):
        engine.prime_count(10**6 + 1)


def test_decade_counts(engine):
    """Per-decade counts for n = 0..5."""
    assert [engine.decade_primes(n).count for n in range(6)] == DECADE_COUNTS


def test_decade_counts_agree_with_prime_count(engine):
    for n in range(6):
        run = engine.decade_primes(IpotInterval(n))
        assert engine.prime_count(10 ** (n + 1)) - engine.prime_count(10**n) == run.count
        assert run.lo == 10**n and run.hi == 10 ** (n + 1)


def test_decade_primes_is_memoized(engine):
    assert engine.decade_primes(3) is engine.decade_primes(IpotInterval(3))


def test_decade_beyond_capacity(engine):
    with pytest.raises(RangeTooLargeError) as exc_info:
        engine.decade_primes(6)
    assert "estimators" in str(exc_info.value)


def test_ipot_interval():
    interval = IpotInterval(3)
    assert (interval.lo, interval.hi) == (1000, 10000)
    assert interval.digit_bounds(7) == (7000, 8000)
    assert str(interval) == "[10^3, 10^4)"
    assert IpotInterval(144).hi == 10**145
    with pytest.raises(InputValidationError):
        IpotInterval(-1)
    with pytest.raises(InputValidationError):
        interval.digit_bounds(0)


def test_simple_sieve():
    assert simple_sieve(30).tolist() == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert simple_sieve(1).size == 0


def test_module_functions_use_given_engine(engine):
    assert sieve_range(10, 20, engine).count == 4
    assert prime_count(100, engine) == 25
    assert isinstance(decade_primes(2, engine), PrimeRun)


def test_settings_from_env(monkeypatch, tmp_path):
    monkeypatch.setenv("PRIME_DIGITS_CAPACITY", "1e7")
    monkeypatch.setenv("PRIME_DIGITS_WORKERS", "3")
    monkeypatch.setenv("PRIME_DIGITS_CACHE_DIR", str(tmp_path))
    monkeypatch.delenv("PRIME_DIGITS_SEGMENT_SIZE", raising=False)

    settings = Settings.from_env()
    assert settings.capacity == 10**7
    assert settings.workers == 3
    assert settings.cache_dir == tmp_path

    overridden = Settings.from_env(capacity=2 * 10**6, workers=None)
    assert overridden.capacity == 2 * 10**6
    assert overridden.workers == 3


def test_settings_defaults(monkeypatch):
    for name in ("PRIME_DIGITS_CAPACITY", "PRIME_DIGITS_WORKERS", "PRIME_DIGITS_CACHE_DIR",
                 "PRIME_DIGITS_SEGMENT_SIZE"):
        monkeypatch.delenv(name, raising=False)
    settings = Settings.from_env()
    assert settings.capacity == DEFAULT_CAPACITY
    assert settings.cache_dir is None
    assert PrimeEngine(settings).cache is None


def test_settings_validation(monkeypatch):
    with pytest.raises(ConfigurationError):
        Settings(workers=0)
    with pytest.raises(ConfigurationError):
        Settings(segment_size=1)
    monkeypatch.setenv("PRIME_DIGITS_CAPACITY", "lots")
    with pytest.raises(ConfigurationError):
        Settings.from_env()


@pytest.mark.slow
def test_prime_count_to_capacity_default():
    big = PrimeEngine(Settings(capacity=10**8, workers=4))
    assert big.prime_count(10**8) == 5_761_455
    assert big.decade_primes(7).count == 5_096_876
