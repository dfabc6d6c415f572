#!/usr/bin/env python3
"""
Estimator and empirical density tests.

Usage:
    pytest prime_digits/tests/test_density_analysis.py -v
"""

import math
from decimal import Decimal

import numpy as np
import pytest
from scipy import special

from prime_digits.config import Settings
from prime_digits.density_analysis import (
    DensitySubject,
    WindowSpec,
    average_gap_empirical,
    average_gap_estimate,
    counting_comparison,
    crude_count,
    decade_count_estimate,
    decade_count_report,
    density_curve,
    digit_count_estimate,
    digit_count_report,
    digit_proportion_estimates,
    exact_decade_count_estimate,
    exact_digit_count_estimate,
    finite_log_density,
    gap_table,
    growth_factor_estimate,
    growth_factors,
    histogram,
    li_count,
    log_density,
    log_density_counts,
    log_density_curve,
    midpoint_log_density,
    prime_density,
    rank_trend,
    windowed_density,
)
from prime_digits.errors import (
    ConfigurationError,
    DomainError,
    InputValidationError,
    InsufficientPrimesError,
    RangeTooLargeError,
)
from prime_digits.numeric import adaptive_simpson, round_half_away, round_to_integer
from prime_digits.prime_engine import PrimeEngine

ESTIMATE_PERCENT_ROWS = {
    5: [12.2, 11.7, 11.4, 11.1, 11.0, 10.8, 10.7, 10.6, 10.5],
    6: [12.0, 11.6, 11.3, 11.1, 11.0, 10.9, 10.8, 10.7, 10.6],
    7: [11.9, 11.5, 11.3, 11.1, 11.0, 10.9, 10.8, 10.7, 10.7],
    8: [11.8, 11.5, 11.3, 11.1, 11.0, 10.9, 10.9, 10.8, 10.7],
    9: [11.7, 11.4, 11.3, 11.1, 11.0, 11.0, 10.9, 10.8, 10.8],
    10: [11.7, 11.4, 11.2, 11.1, 11.0, 11.0, 10.9, 10.8, 10.8],
    11: [11.6, 11.4, 11.2, 11.1, 11.0, 11.0, 10.9, 10.9, 10.8],
    12: [11.6, 11.4, 11.2, 11.1, 11.1, 11.0, 10.9, 10.9, 10.9],
    **{n: [11.5, 11.3, 11.2, 11.1, 11.1, 11.0, 11.0, 10.9, 10.9] for n in range(13, 17)},
    **{n: [11.4, 11.3, 11.2, 11.1, 11.1, 11.0, 11.0, 11.0, 10.9] for n in range(17, 20)},
    **{n: [11.4, 11.3, 11.2, 11.1, 11.1, 11.0, 11.0, 11.0, 11.0] for n in range(20, 22)},
    143: [11.2] + [11.1] * 8,
    144: [11.1] * 9,
}


@pytest.fixture(scope="module")
def engine():
    return PrimeEngine(Settings(capacity=10**6))


def li_oracle(x):
    return special.expi(math.log(x)) - special.expi(math.log(2))


def test_prime_density():
    assert round(prime_density(373), 3) == 0.169
    assert round(prime_density(1709), 3) == 0.134
    assert prime_density(math.e) == pytest.approx(1.0)
    for bad in (1, 0.5, -3):
        with pytest.raises(DomainError):
            prime_density(bad)


def test_prime_density_decreases():
    xs = np.geomspace(1.01, 1e12, 200)
    values = [prime_density(x) for x in xs]
    assert all(a > b for a, b in zip(values, values[1:]))


@pytest.mark.parametrize("n", [1, 2, 5, 37, 144])
def test_decade_density_ratio(n):
    assert prime_density(10.0**n) / prime_density(10.0 ** (n + 1)) == pytest.approx((n + 1) / n, rel=1e-12)


def test_windowed_density(engine):
    assert windowed_density(WindowSpec(372, 42), engine) == 7 / 42
    assert windowed_density(WindowSpec(1710, 54), engine) == 7 / 54
    assert windowed_density(WindowSpec(25, 2), engine) == 0
    assert WindowSpec(372, 42).bounds == (351, 393)


def test_windowed_density_near_zero(engine):
    # [-1, 3) holds only the prime 2
    assert windowed_density(WindowSpec(1, 4), engine) == 1 / 4
    assert windowed_density(WindowSpec(0, 2), engine) == 0
    assert windowed_density(WindowSpec(2, 4), engine) == 2 / 4


def test_windowed_density_errors(engine):
    with pytest.raises(RangeTooLargeError):
        windowed_density(WindowSpec(10**6, 10), engine)
    with pytest.raises(InputValidationError):
        WindowSpec(100, 0)


@pytest.mark.parametrize("x", [3, 10, 1e4, 1e6, 1e8, 1e15])
def test_li_count_matches_exponential_integral(x):
    assert li_count(x) == pytest.approx(li_oracle(x), rel=1e-9)


def test_li_count_values(engine):
    assert li_count(2) == 0
    assert li_count(10**6) == pytest.approx(78627, abs=1)
    assert li_count(10**4) == pytest.approx(1245, abs=1)
    with pytest.raises(DomainError):
        li_count(1.5)


@pytest.mark.parametrize("x,tolerance", [(10**4, 0.015), (10**5, 0.01), (10**6, 0.01)])
def test_li_count_close_to_prime_count(engine, x, tolerance):
    actual = engine.prime_count(x)
    assert abs(li_count(x) - actual) / actual < tolerance


def test_crude_count(engine):
    assert round(crude_count(10**6)) == 72382
    assert crude_count(100) == pytest.approx(21.7, abs=0.05)
    assert crude_count(math.e**2) == pytest.approx(math.e**2 / 2)
    for x in (10**2, 10**3, 10**4, 10**5, 10**6):
        assert crude_count(x) < engine.prime_count(x)
    with pytest.raises(DomainError):
        crude_count(2.5)


def test_counting_comparison(engine):
    comparison = counting_comparison(10**5, engine)
    assert comparison.prime_count == 9592
    assert comparison.crude_count < comparison.prime_count < comparison.li_count
    assert comparison.prime_density == pytest.approx(1 / math.log(10**5))


@pytest.mark.parametrize("n", sorted(ESTIMATE_PERCENT_ROWS))
def test_estimate_percent_rows(n):
    proportions = digit_proportion_estimates(n)
    assert [round_half_away(100 * p, 1) for p in proportions] == ESTIMATE_PERCENT_ROWS[n]


@pytest.mark.parametrize("n", [0, 1, 5, 50, 144, 1000, 10**6])
def test_estimate_proportions_decrease_toward_one_ninth(n):
    values = digit_proportion_estimates(n).values
    assert all(a > b for a, b in zip(values, values[1:]))
    assert math.fsum(values) == pytest.approx(1.0, abs=1e-12)
    assert max(values) - min(values) <= spread(0)


def spread(n):
    values = digit_proportion_estimates(n).values
    return max(values) - min(values)


def test_estimate_spread_shrinks_to_equality():
    spreads = [spread(n) for n in (0, 1, 5, 21, 144, 10**4)]
    assert all(a > b for a, b in zip(spreads, spreads[1:]))
    assert all(abs(p - 1 / 9) < 1e-5 for p in digit_proportion_estimates(10**6).values)
    assert len({round_half_away(100 * p, 1) for p in digit_proportion_estimates(144)}) == 1


def test_digit_count_estimate():
    assert digit_count_estimate(0, 1) == pytest.approx(1 / math.log(1.5))
    assert digit_count_estimate(5, 9) == pytest.approx(10**5 / math.log(9.5e5))
    assert digit_count_estimate(200, 1) == pytest.approx(1e200 / (math.log(1.5) + 200 * math.log(10)), rel=1e-12)
    assert digit_count_estimate(400, 1) == math.inf
    assert round_half_away(sum(digit_count_estimate(0, d) for d in range(1, 10))) == 8


def test_decade_count_estimates():
    assert [round_half_away(decade_count_estimate(n)) for n in range(6)] == [8, 24, 147, 1068, 8379, 68970]
    assert decade_count_estimate(1) == pytest.approx(23.9, abs=0.05)
    for n in range(0, 300, 7):
        assert decade_count_estimate(n + 1) / decade_count_estimate(n) < 10


def test_decade_count_report(engine):
    report = decade_count_report(5, engine)
    assert report.subject is DensitySubject.DECADE_COUNTS
    assert report.theoretical == [8, 24, 147, 1068, 8379, 68970]
    assert report.empirical == [4, 21, 143, 1061, 8363, 68906]


def test_exact_estimates_agree_with_floats():
    for n in (0, 5, 200, 300):
        for d in (1, 9):
            assert float(exact_digit_count_estimate(n, d)) == pytest.approx(digit_count_estimate(n, d), rel=1e-11)
        assert float(exact_decade_count_estimate(n)) == pytest.approx(decade_count_estimate(n), rel=1e-11)
    assert [round_to_integer(exact_decade_count_estimate(n)) for n in range(6)] == [8, 24, 147, 1068, 8379, 68970]
    assert [round_to_integer(midpoint_log_density(n)) for n in range(6)] == [6, 21, 126, 904, 7027, 57496]


def test_decade_counts_past_float_range(engine):
    report = decade_count_report(400, engine)
    assert len(report.rows) == 401
    assert all(isinstance(t, int) for t in report.theoretical)
    expected = 400 + math.log10(math.fsum(1 / (math.log(d + 0.5) + 400 * math.log(10)) for d in range(1, 10)))
    assert math.log10(report.theoretical[400]) == pytest.approx(expected, abs=1e-9)
    assert report.theoretical[250] / decade_count_estimate(250) == pytest.approx(1.0, rel=1e-12)
    assert report.theoretical[:6] == [8, 24, 147, 1068, 8379, 68970]


def test_digit_counts_past_float_range(engine):
    report = digit_count_report(400, engine)
    assert report.empirical is None
    for d, t in zip(range(1, 10), report.theoretical):
        assert isinstance(t, int)
        expected = 400 - math.log10(math.log(d + 0.5) + 400 * math.log(10))
        assert math.log10(t) == pytest.approx(expected, abs=1e-9)
    assert all(math.isfinite(t) for t in digit_count_report(300, engine).theoretical)


def test_digit_count_report(engine):
    report = digit_count_report(2, engine)
    assert sum(report.empirical) == 143
    assert len(report.theoretical) == 9
    assert digit_count_report(30, engine).empirical is None


def test_growth_factors(engine):
    report = growth_factors(10, engine)
    empirical = [round_half_away(v, 1) for v in report.empirical if v is not None]
    theoretical = [round_half_away(v, 1) for v in report.theoretical]
    assert empirical == [5.3, 6.8, 7.4, 7.9, 8.2]
    assert theoretical[5:10] == [8.5, 8.7, 8.8, 9.0, 9.1]
    assert report.rows[5].empirical is None
    assert report.rows[0].label == "0->1"


def test_growth_factor_limit():
    assert abs(growth_factor_estimate(1000) - 10) < 0.05
    assert growth_factor_estimate(5) < growth_factor_estimate(50) < growth_factor_estimate(500) < 10
    with pytest.raises(DomainError):
        growth_factors(0)


def test_average_gap_estimate():
    assert round_half_away(average_gap_estimate(37, 1), 1) == 85.6
    assert round_half_away(average_gap_estimate(37, 9), 1) == 87.4
    assert average_gap_estimate(0, 9) / average_gap_estimate(0, 1) == pytest.approx(5.55, abs=0.005)
    with pytest.raises(InputValidationError):
        average_gap_estimate(3, 10)


def test_average_gap_empirical(engine):
    assert average_gap_empirical(10, 20, engine) == pytest.approx(8 / 3)
    assert round_half_away(average_gap_empirical(100, 200, engine), 1) == 4.9
    assert round_half_away(average_gap_empirical(100_000, 200_000, engine), 1) == 11.9
    assert average_gap_empirical(2, 4, engine) == 1


def test_average_gap_empirical_loose_agreement(engine):
    """Ranges where the published averages follow a different convention."""
    assert average_gap_empirical(900, 999, engine) == pytest.approx(7.9, abs=1.1)
    assert average_gap_empirical(10, 20, engine) == pytest.approx(2.6, abs=1.1)


def test_average_gap_needs_two_primes(engine):
    with pytest.raises(InsufficientPrimesError):
        average_gap_empirical(90, 99, engine)
    with pytest.raises(InsufficientPrimesError):
        average_gap_empirical(24, 28, engine)


def test_gap_table(engine):
    within = gap_table(5, engine)
    assert within.subject is DensitySubject.GAPS
    assert all(row.empirical is not None for row in within.rows)
    assert within.rows[0].empirical < within.rows[8].empirical

    beyond = gap_table(37, engine)
    assert beyond.empirical is None
    assert round_half_away(beyond.rows[0].theoretical, 1) == 85.6

    assert gap_table(0, engine).rows[0].empirical is None


def test_log_density():
    assert log_density(316.2) == pytest.approx(126.5, abs=0.05)
    assert log_density(10) == pytest.approx(10)
    assert round_half_away(log_density(10**5.5)) == 57496
    with pytest.raises(DomainError):
        log_density(1)


def test_log_density_increases_from_three():
    rng = np.random.default_rng(5)
    xs = np.unique(np.concatenate([[3.0], rng.uniform(3, 1e9, 500), np.geomspace(3, 1e100, 100)]))
    values = [log_density(x) for x in xs]
    assert all(a < b for a, b in zip(values, values[1:]) )


def test_finite_log_density_converges():
    assert finite_log_density(1000, 1e-6) == pytest.approx(log_density(1000), rel=1e-8)
    assert finite_log_density(316.2, 1) == pytest.approx(126.5, rel=0.005)
    errors = [abs(finite_log_density(1000, m) - log_density(1000)) for m in (1, 0.1, 0.01, 0.001)]
    assert all(a > b for a, b in zip(errors, errors[1:]))
    with pytest.raises(DomainError):
        finite_log_density(1000, 0)
    with pytest.raises(DomainError):
        finite_log_density(0.5, 1)


def test_log_density_counts(engine):
    report = log_density_counts(5, engine)
    assert report.subject is DensitySubject.LOG_DENSITY_COUNTS
    assert report.theoretical == [6, 21, 126, 904, 7027, 57496]
    assert report.empirical == [4, 21, 143, 1061, 8363, 68906]
    assert log_density_counts(8, engine).rows[8].empirical is None


def test_log_density_counts_past_float_range(engine):
    report = log_density_counts(400, engine)
    assert all(isinstance(t, int) for t in report.theoretical)
    assert math.log10(report.theoretical[400]) == pytest.approx(400.5 - math.log10(400.5), abs=1e-9)
    assert report.theoretical[:6] == [6, 21, 126, 904, 7027, 57496]


def test_histogram_of_decade_four(engine):
    primes = engine.decade_primes(4).primes
    counts = histogram(primes, 10**4, 10**5, 30)
    assert len(counts) == 30
    assert sum(counts) == 8363
    assert (10**5 - 10**4) / 30 == 3000
    assert rank_trend(counts) < 0

    log_counts = histogram(np.log10(primes.astype(float)), 4, 5, 30)
    assert sum(log_counts) == 8363
    assert log_counts[-1] > log_counts[0]
    assert rank_trend(log_counts) > 0.9


def test_histogram_edges():
    assert histogram([], 0, 1, 5) == [0, 0, 0, 0, 0]
    assert histogram([0.0, 0.5, 1.0], 0, 1, 2) == [1, 2]
    with pytest.raises(ConfigurationError):
        histogram([1.0], 0, 1, 0)
    with pytest.raises(InputValidationError):
        histogram([1.0], 1, 1, 3)


def test_density_curve(engine):
    report = density_curve(1000, 11000, 1000, engine)
    assert len(report.rows) == 10
    assert report.rows[0].label == "1500"
    assert report.rows[0].empirical == (engine.prime_count(1999) - engine.prime_count(999)) / 1000
    for row in report.rows:
        assert row.empirical == pytest.approx(row.theoretical, rel=0.25)


def test_log_density_curve(engine):
    report = log_density_curve(10_000, 1_000_000, 10_000, engine)
    assert report.subject is DensitySubject.LOG_DENSITY_CURVE
    assert len(report.rows) == 99
    for row in report.rows:
        assert row.empirical == pytest.approx(row.theoretical, rel=0.15)
    with pytest.raises(ConfigurationError):
        log_density_curve(10, 100, 0, engine)


def test_adaptive_simpson():
    assert adaptive_simpson(math.sin, 0, math.pi) == pytest.approx(2.0, rel=1e-9)
    assert adaptive_simpson(lambda t: t**3, 0, 2) == pytest.approx(4.0)
    assert adaptive_simpson(math.exp, 1, 0) == pytest.approx(-(math.e - 1), rel=1e-9)
    assert adaptive_simpson(math.exp, 1, 1) == 0


def test_round_half_away():
    assert round_half_away(903.5) == 904
    assert round_half_away(-2.5) == -3
    assert round_half_away(5.25, 1) == 5.3
    assert round_half_away(1.5e40) == 1.5e40
    assert round_to_integer(Decimal("2.5")) == 3
    assert round_to_integer(Decimal("1" + "0" * 400 + ".5")) == 10**400 + 1
    for bad in (math.inf, -math.inf, math.nan):
        with pytest.raises(DomainError):
            round_half_away(bad)
    with pytest.raises(DomainError):
        round_to_integer(Decimal("Infinity"))
