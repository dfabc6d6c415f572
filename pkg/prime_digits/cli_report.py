#!/usr/bin/env python3
"""
Command-line front end for prime digit analysis.

Every subcommand builds one tabular Report and writes it as CSV or JSON to
standard output or --out. Status lines go to standard error and only with
--verbose; standard output carries nothing but the report.

CSV reports open with "# key: <json>" metadata lines (tool, version,
subcommand, generated, config, summary) ahead of the header row. Drop the
lines starting with "#" before handing the text to csv.DictReader, or pass
--format json to get the metadata as an object.

Exit status:
    0  report written
    1  computation error (capacity exceeded, corrupt cache, empty dataset, ...)
    2  usage error

Usage:
    prime-digits digits --decade 5
    prime-digits figure10 --decades 1-21,143,144 --format json
    prime-digits mdd --decade 1
    prime-digits dataset quakes.txt --reference benford
"""

import argparse
import csv
import io
import json
import logging
import math
import sys
from datetime import datetime
from enum import Enum
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from . import density_analysis as density
from . import digit_analysis as digits
from . import dirichlet
from ._version import __version__
from .config import MIN_CAPACITY, Settings
from .errors import (
    CacheIntegrityError,
    ConfigurationError,
    PrimeDigitsError,
    RangeTooLargeError,
    ReportEncodingError,
)
from .numeric import round_half_away
from .prime_cache import PrimeCache
from .prime_engine import IpotInterval, PrimeEngine, get_engine

logger = logging.getLogger(__name__)

TOOL_NAME = "prime-digits"
DEFAULT_FIGURE10_DECADES = "1-21,143,144"
# exact decade estimates stay below Python's 4300-digit int-to-str limit
MAX_DECADE = 4000


class Subcommand(str, Enum):
    SIEVE = "sieve"
    DIGITS = "digits"
    ESTIMATE = "estimate"
    FIGURE10 = "figure10"
    MDD = "mdd"
    DIRICHLET = "dirichlet"
    MERSENNE = "mersenne"
    INTEGERS = "integers"
    LOGDENSITY = "logdensity"
    HISTOGRAM = "histogram"
    GAPS = "gaps"
    GROWTH = "growth"
    LOGMARCH = "logmarch"
    DATASET = "dataset"
    DENSITY = "density"
    CACHE = "cache"


class OutputFormat(str, Enum):
    CSV = "csv"
    JSON = "json"


class Reference(str, Enum):
    BENFORD = "benford"
    UNIFORM = "uniform"


# at least one of these options must be given
_NEEDS_ONE_OF = {
    Subcommand.SIEVE: ("bounds",),
    Subcommand.DIGITS: ("decade", "bounds"),
    Subcommand.ESTIMATE: ("decade", "xmax", "nmax"),
    Subcommand.DIRICHLET: ("xmax",),
    Subcommand.MERSENNE: ("xmax",),
    Subcommand.HISTOGRAM: ("decade", "bounds"),
    Subcommand.GAPS: ("decade", "bounds"),
    Subcommand.LOGMARCH: ("bounds",),
    Subcommand.DATASET: ("path",),
    Subcommand.DENSITY: ("bounds",),
}


class RunConfig(BaseModel):
    """One validated CLI invocation."""

    model_config = ConfigDict(extra="forbid")

    subcommand: Subcommand
    format: OutputFormat = OutputFormat.CSV
    out: Optional[Path] = None
    cache_dir: Optional[Path] = None
    capacity: Optional[int] = None
    workers: Optional[int] = Field(None, ge=1)
    refresh_cache: bool = False
    verbose: bool = False

    decade: Optional[int] = Field(None, ge=0, le=MAX_DECADE)
    bounds: Optional[Tuple[int, int]] = None
    digit: Optional[int] = Field(None, ge=1, le=9)
    s: List[float] = Field(default_factory=lambda: [1.0])
    xmax: Optional[int] = Field(None, ge=2)
    nmax: Optional[int] = Field(None, ge=0, le=MAX_DECADE)
    bins: int = Field(30, ge=1)
    width: int = Field(100, ge=1)
    log: bool = False
    count: bool = False
    decades: List[int] = Field(default_factory=lambda: parse_decades(DEFAULT_FIGURE10_DECADES))
    empirical_max: int = Field(5, ge=0, le=MAX_DECADE)
    reference: Reference = Reference.BENFORD
    path: Optional[Path] = None
    warm: Optional[int] = Field(None, ge=0)

    @field_validator("capacity")
    @classmethod
    def capacity_floor(cls, v: Optional[int]) -> Optional[int]:
        if v is not None and v < MIN_CAPACITY:
            raise ValueError(f"capacity must be at least {MIN_CAPACITY:,}")
        return v

    @field_validator("decades")
    @classmethod
    def decades_in_range(cls, v: List[int]) -> List[int]:
        if any(n > MAX_DECADE for n in v):
            raise ValueError(f"decades must not exceed {MAX_DECADE}")
        return v

    @field_validator("s")
    @classmethod
    def powers_at_least_one(cls, v: List[float]) -> List[float]:
        if not v or any(not s >= 1 for s in v):
            raise ValueError("every --s value must be >= 1")
        return v

    @field_validator("bounds")
    @classmethod
    def ordered_bounds(cls, v: Optional[Tuple[int, int]]) -> Optional[Tuple[int, int]]:
        if v is not None and not 0 <= v[0] < v[1]:
            raise ValueError(f"--range needs 0 <= LO < HI, got {v[0]} {v[1]}")
        return v

    @model_validator(mode="after")
    def required_options(self) -> "RunConfig":
        options = _NEEDS_ONE_OF.get(self.subcommand)
        if options and all(getattr(self, name) is None for name in options):
            flags = " or ".join(f"--{'range' if name == 'bounds' else name}" for name in options)
            raise ValueError(f"{self.subcommand.value} needs {flags}")
        return self

    def settings(self) -> Settings:
        """
        Environment settings with this invocation's flags applied.

        Raises:
            ConfigurationError: If PRIME_DIGITS_CAPACITY is below the command-line floor
        """
        settings = Settings.from_env(
            capacity=self.capacity,
            cache_dir=self.cache_dir,
            workers=self.workers,
            refresh_cache=self.refresh_cache or None,
        )
        if settings.capacity < MIN_CAPACITY:
            raise ConfigurationError(
                f"PRIME_DIGITS_CAPACITY must be at least {MIN_CAPACITY:,}, got {settings.capacity:,}"
            )
        return settings


class ReportMeta(BaseModel):
    tool: str = TOOL_NAME
    version: str = __version__
    subcommand: str
    generated: str = Field(default_factory=lambda: datetime.now().isoformat(timespec="seconds"))
    config: Dict[str, Any] = Field(default_factory=dict)
    summary: Dict[str, Any] = Field(default_factory=dict)


class Report(BaseModel):
    """Metadata plus one table whose header is fixed per subcommand and mode."""

    meta: ReportMeta
    columns: List[str]
    rows: List[Dict[str, Any]]

    @classmethod
    def build(cls, subcommand: str, columns: Sequence[str], rows: Sequence[Sequence[Any]],
              config: Optional[RunConfig] = None, **summary) -> "Report":
        echo = config.model_dump(mode="json", exclude_none=True) if config else {}
        return cls(
            meta=ReportMeta(subcommand=subcommand, config=echo, summary=_plain(summary)),
            columns=list(columns),
            rows=[dict(zip(columns, _plain(list(row)))) for row in rows],
        )

    def to_csv(self) -> str:
        buffer = io.StringIO()
        for key, value in self.meta.model_dump(mode="json").items():
            buffer.write(f"# {key}: {json.dumps(value, sort_keys=True)}\n")
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([_csv_cell(row.get(column)) for column in self.columns])
        return buffer.getvalue()

    def to_json(self) -> str:
        """
        Strict JSON, with no NaN or Infinity tokens.

        Raises:
            ReportEncodingError: If a value is not finite
        """
        payload = {"meta": self.meta.model_dump(mode="json"), "rows": self.rows}
        try:
            return json.dumps(payload, indent=2, allow_nan=False)
        except ValueError as e:
            raise ReportEncodingError(f"{self.meta.subcommand} report holds a non-finite value: {e}")

    def render(self, fmt: OutputFormat) -> str:
        return self.to_json() + "\n" if fmt is OutputFormat.JSON else self.to_csv()


def _plain(value: Any) -> Any:
    """Convert numpy scalars and containers to plain Python values."""
    if isinstance(value, dict):
        return {k: _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.generic):
        return value.item()
    return value


def _csv_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return format(value, ".12g")
    return str(value)


def _percent(p: float) -> float:
    return round_half_away(100 * p, 1)


def parse_decades(text: str) -> List[int]:
    """Parse '1-21,143,144' into a sorted list of distinct decade exponents."""
    decades = set()
    try:
        for part in text.split(","):
            part = part.strip()
            if "-" in part:
                first, last = (int(x) for x in part.split("-", 1))
                if first > last or last > MAX_DECADE:
                    raise ValueError(part)
                decades.update(range(first, last + 1))
            elif part:
                decades.add(int(part))
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid decade list {text!r}")
    if not decades or min(decades) < 0:
        raise argparse.ArgumentTypeError(f"invalid decade list {text!r}")
    return sorted(decades)


def _parse_powers(text: str) -> List[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid list of powers {text!r}")


def _integer(text: str) -> int:
    """Accept 1000000, 1_000_000 and 1e6."""
    try:
        if "e" in text.lower():
            value = float(text)
            if not value.is_integer():
                raise ValueError(text)
            return int(value)
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid integer {text!r}")


def _digit_rows(tally: digits.DigitVector) -> List[List[Any]]:
    proportions = digits.to_proportions(tally)
    return [[d, tally[d], _percent(proportions[d]), proportions[d]] for d in digits.DIGITS]


def _mdd_rows(table: dirichlet.MddTable) -> List[List[Any]]:
    return [
        [table.n, d, table.ratios[d], _percent(table.ratios[d]), dirichlet.mdd_theoretical(d), table.ssd_vs_benford]
        for d in digits.DIGITS
    ]


MDD_COLUMNS = ["n", "d", "ratio", "percent", "benford", "ssd"]
DIGIT_COLUMNS = ["digit", "count", "percent", "proportion"]


def emit_figure10(n_empirical_max: int, n_list: Sequence[int], engine: Optional[PrimeEngine] = None,
                  config: Optional[RunConfig] = None) -> Report:
    """
    Digit proportions per decade: actual rows up to n_empirical_max, estimates beyond.

    Args:
        n_empirical_max: Last decade computed from sieved primes
        n_list: Decades to report
        engine: Prime engine; the process default when omitted
        config: Invocation echoed into the report metadata

    Raises:
        RangeTooLargeError: If decade n_empirical_max does not fit in the capacity
    """
    engine = engine or get_engine()
    engine.check_capacity(IpotInterval(n_empirical_max).hi,
                          "lower --empirical-max or raise --capacity")
    columns = ["n", "source"] + [f"pct_{d}" for d in digits.DIGITS] + [f"prop_{d}" for d in digits.DIGITS]
    rows = []
    for n in n_list:
        if n <= n_empirical_max:
            source, vector = "actual", digits.decade_digit_proportions(n, engine)
        else:
            source, vector = "estimate", density.digit_proportion_estimates(n)
        rows.append([n, source] + [_percent(p) for p in vector] + list(vector))
    return Report.build(Subcommand.FIGURE10.value, columns, rows, config)


def emit_log_march(lo: int, hi: int, engine: Optional[PrimeEngine] = None,
                   config: Optional[RunConfig] = None) -> Report:
    """log10(p) for every prime in [lo, hi), as one plot-ready column."""
    run = (engine or get_engine()).sieve_range(lo, hi)
    values = np.log10(run.primes.astype(float)) if len(run) else np.empty(0)
    return Report.build(Subcommand.LOGMARCH.value, ["log10_p"], [[v] for v in values.tolist()], config,
                        count=run.count)


def emit_dataset_report(path: Path, reference: Reference = Reference.BENFORD,
                        config: Optional[RunConfig] = None) -> Report:
    """
    Digit tally, proportions and SSD of a dataset file against a reference law.

    Raises:
        InputValidationError: If the file cannot be read
        EmptyDatasetError: If it holds no usable values
    """
    sample = digits.read_dataset(path)
    tally = digits.digit_tally(sample)
    ref = digits.benford_vector() if Reference(reference) is Reference.BENFORD else digits.uniform_vector()
    score = digits.ssd(digits.to_proportions(tally), ref)
    rows = [row + [ref[row[0]], score] for row in _digit_rows(tally)]
    return Report.build(Subcommand.DATASET.value, DIGIT_COLUMNS + ["reference", "ssd"], rows, config,
                        values=len(sample), skipped=sample.skipped, ssd=score,
                        reference=Reference(reference).value)


def _sieve(config: RunConfig, engine: PrimeEngine) -> Report:
    lo, hi = config.bounds
    run = engine.sieve_range(lo, hi)
    if config.count:
        return Report.build(config.subcommand.value, ["lo", "hi", "count"], [[lo, hi, run.count]], config)
    return Report.build(config.subcommand.value, ["p"], [[p] for p in run], config, count=run.count)


def _digits(config: RunConfig, engine: PrimeEngine) -> Report:
    if config.decade is not None:
        run = engine.decade_primes(config.decade)
    else:
        run = engine.sieve_range(*config.bounds)
    return Report.build(config.subcommand.value, DIGIT_COLUMNS, _digit_rows(digits.digit_tally(run)), config,
                        lo=run.lo, hi=run.hi, primes=run.count)


def _estimate(config: RunConfig, engine: PrimeEngine) -> Report:
    if config.xmax is not None:
        c = density.counting_comparison(config.xmax, engine)
        columns = ["x", "prime_count", "li_count", "crude_count", "prime_density"]
        return Report.build(config.subcommand.value, columns,
                            [[c.x, c.prime_count, c.li_count, c.crude_count, c.prime_density]], config)

    if config.decade is not None:
        report = density.digit_count_report(config.decade, engine)
        shares = density.digit_proportion_estimates(config.decade)
        rows = [
            [int(row.label), row.theoretical, row.empirical, _percent(shares[d]), shares[d]]
            for d, row in zip(digits.DIGITS, report.rows)
        ]
        columns = ["digit", "estimated_count", "actual_count", "estimated_percent", "estimated_proportion"]
        return Report.build(config.subcommand.value, columns, rows, config, scope=report.scope)

    report = density.decade_count_report(config.nmax, engine)
    rows = [[int(row.label), row.theoretical, row.empirical] for row in report.rows]
    return Report.build(config.subcommand.value, ["n", "estimated_count", "actual_count"], rows, config)


def _figure10(config: RunConfig, engine: PrimeEngine) -> Report:
    return emit_figure10(config.empirical_max, config.decades, engine, config)


def _decade_list(config: RunConfig) -> List[int]:
    return [config.decade] if config.decade is not None else list(range(1, 6))


def _mdd(config: RunConfig, engine: PrimeEngine) -> Report:
    rows = []
    for n in _decade_list(config):
        table = dirichlet.mdd_table(n, engine)
        if config.digit is not None:
            rows.extend(row for row in _mdd_rows(table) if row[1] == config.digit)
        else:
            rows.extend(_mdd_rows(table))
    return Report.build(config.subcommand.value, MDD_COLUMNS, rows, config)


def _dirichlet(config: RunConfig, engine: PrimeEngine) -> Report:
    selected = [config.digit] if config.digit is not None else digits.DIGITS
    rows = [
        [point.d, point.s, point.x_max, point.ratio]
        for d in selected
        for point in dirichlet.dirichlet_sweep(d, config.s, config.xmax, engine)
    ]
    return Report.build(config.subcommand.value, ["d", "s", "x_max", "ratio"], rows, config)


def _mersenne(config: RunConfig, engine: PrimeEngine) -> Report:
    rows = []
    for s in config.s:
        result = dirichlet.mersenne_ratio(config.xmax, s, engine)
        rows.append([result.x_max, result.s, result.mersenne_count, result.ratio, result.naive_frequency,
                     " ".join(str(m) for m in result.mersenne_primes)])
    columns = ["x_max", "s", "mersenne_count", "ratio", "naive_frequency", "mersenne_primes"]
    return Report.build(config.subcommand.value, columns, rows, config)


def _integers(config: RunConfig, engine: PrimeEngine) -> Report:
    rows = []
    for n in _decade_list(config):
        rows.extend(_mdd_rows(dirichlet.integer_mdd_table(n, engine)))
    return Report.build(config.subcommand.value, MDD_COLUMNS, rows, config)


def _logdensity(config: RunConfig, engine: PrimeEngine) -> Report:
    report = density.log_density_counts(config.nmax if config.nmax is not None else 5, engine)
    rows = [[int(row.label), row.theoretical, row.empirical] for row in report.rows]
    return Report.build(config.subcommand.value, ["n", "theoretical", "actual"], rows, config)


def _histogram(config: RunConfig, engine: PrimeEngine) -> Report:
    if config.decade is not None:
        interval = IpotInterval(config.decade)
        run, lo, hi = engine.decade_primes(interval), interval.lo, interval.hi
    else:
        run = engine.sieve_range(*config.bounds)
        lo, hi = config.bounds
    values = run.primes.astype(float)
    if config.log:
        values, lo, hi = np.log10(values), math.log10(lo), math.log10(hi)
    counts = density.histogram(values, lo, hi, config.bins)
    step = (hi - lo) / config.bins
    rows = [[lo + b * step, count] for b, count in enumerate(counts)]
    trend = density.rank_trend(counts) if len(set(counts)) > 1 else None
    return Report.build(config.subcommand.value, ["x", "value"], rows, config,
                        bin_width=step, spearman_rho=trend)


def _gaps(config: RunConfig, engine: PrimeEngine) -> Report:
    columns = ["lo", "hi", "estimate", "empirical"]
    if config.bounds is not None:
        lo, hi = config.bounds
        gap = density.average_gap_empirical(lo, hi, engine)
        return Report.build(config.subcommand.value, columns, [[lo, hi, math.log((lo + hi) / 2), gap]], config)

    interval = IpotInterval(config.decade)
    report = density.gap_table(config.decade, engine)
    rows = [
        [*interval.digit_bounds(d), row.theoretical, row.empirical]
        for d, row in zip(digits.DIGITS, report.rows)
    ]
    return Report.build(config.subcommand.value, columns, rows, config, scope=report.scope)


def _growth(config: RunConfig, engine: PrimeEngine) -> Report:
    report = density.growth_factors(config.nmax if config.nmax is not None else 10, engine)
    rows = [[row.label, row.theoretical, row.empirical] for row in report.rows]
    return Report.build(config.subcommand.value, ["step", "theoretical", "empirical"], rows, config)


def _logmarch(config: RunConfig, engine: PrimeEngine) -> Report:
    return emit_log_march(*config.bounds, engine, config)


def _dataset(config: RunConfig, engine: PrimeEngine) -> Report:
    return emit_dataset_report(config.path, config.reference, config)


def _density(config: RunConfig, engine: PrimeEngine) -> Report:
    lo, hi = config.bounds
    curve = density.log_density_curve if config.log else density.density_curve
    report = curve(lo, hi, config.width, engine)
    rows = [[int(row.label), row.empirical, row.theoretical] for row in report.rows]
    return Report.build(config.subcommand.value, ["x", "empirical", "theoretical"], rows, config,
                        subject=report.subject.value)


def _cache(config: RunConfig, engine: PrimeEngine) -> Report:
    if engine.cache is None:
        raise ConfigurationError("no cache directory configured; pass --cache-dir or set PRIME_DIGITS_CACHE_DIR")
    if config.warm is not None:
        for n in range(config.warm + 1):
            engine.decade_primes(n)
    cache: PrimeCache = engine.cache
    rows = []
    for n in cache.get_stats()["decades"]:
        item = cache.entry(n)
        rows.append([n, item["count"], item["byte_length"], f"{item['checksum']:08x}"])
    return Report.build(config.subcommand.value, ["n", "count", "byte_length", "crc32"], rows, config,
                        base_directory=str(cache.base_dir))


HANDLERS: Dict[Subcommand, Callable[[RunConfig, PrimeEngine], Report]] = {
    Subcommand.SIEVE: _sieve,
    Subcommand.DIGITS: _digits,
    Subcommand.ESTIMATE: _estimate,
    Subcommand.FIGURE10: _figure10,
    Subcommand.MDD: _mdd,
    Subcommand.DIRICHLET: _dirichlet,
    Subcommand.MERSENNE: _mersenne,
    Subcommand.INTEGERS: _integers,
    Subcommand.LOGDENSITY: _logdensity,
    Subcommand.HISTOGRAM: _histogram,
    Subcommand.GAPS: _gaps,
    Subcommand.GROWTH: _growth,
    Subcommand.LOGMARCH: _logmarch,
    Subcommand.DATASET: _dataset,
    Subcommand.DENSITY: _density,
    Subcommand.CACHE: _cache,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=[f.value for f in OutputFormat], help="Report format (default: csv)")
    common.add_argument("--out", type=Path, help="Write the report here instead of standard output")
    common.add_argument("--cache-dir", type=Path, help="Prime cache directory (default: $PRIME_DIGITS_CACHE_DIR)")
    common.add_argument("--capacity", type=_integer, help="Sieve capacity (default: $PRIME_DIGITS_CAPACITY or 1e8)")
    common.add_argument("--workers", type=_integer, help="Threads used to sieve segments")
    common.add_argument("--refresh-cache", action="store_true", default=None,
                        help="Recompute and overwrite cached decades that fail verification")
    common.add_argument("--verbose", "-v", action="store_true", default=None, help="Status lines on stderr")

    parser = argparse.ArgumentParser(prog=TOOL_NAME, description="Leading-digit analysis of prime numbers")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True, metavar="SUBCOMMAND")

    def add(name: str, help_text: str) -> argparse.ArgumentParser:
        return sub.add_parser(name, parents=[common], help=help_text, description=help_text)

    def decade(p, help_text="Decade exponent N for [10^N, 10^(N+1))"):
        p.add_argument("--decade", type=_integer, help=help_text)

    def bounds(p):
        p.add_argument("--range", dest="bounds", nargs=2, type=_integer, metavar=("LO", "HI"),
                       help="Half-open integer range [LO, HI)")

    def digit(p):
        p.add_argument("--digit", type=int, choices=range(1, 10), metavar="D", help="Leading digit 1..9")

    def powers(p):
        p.add_argument("--s", type=_parse_powers, metavar="LIST", help="Comma-separated powers s >= 1 (default: 1)")

    def xmax(p, help_text="Truncation bound"):
        p.add_argument("--xmax", type=_integer, help=help_text)

    def nmax(p, help_text):
        p.add_argument("--nmax", type=_integer, help=help_text)

    p = add("sieve", "List or count the primes in a range")
    bounds(p)
    p.add_argument("--count", action="store_true", default=None, help="Emit only the prime count")

    p = add("digits", "Leading-digit tally of the primes in a decade or range")
    decade(p)
    bounds(p)

    p = add("estimate", "Prime-number-theorem estimates against actual counts")
    decade(p, "Per-digit estimates for decade N")
    xmax(p, "Compare pi(x) with li(x) and x/ln(x)")
    nmax(p, "Decade count estimates for n = 0..N")

    p = add("figure10", "Digit distributions per decade, actual then estimated")
    p.add_argument("--decades", type=parse_decades, help=f"Decade list (default: {DEFAULT_FIGURE10_DECADES})")
    p.add_argument("--empirical-max", type=_integer, help="Last decade taken from sieved primes (default: 5)")

    p = add("mdd", "Modified Dirichlet Density table (decades 1..5 unless --decade)")
    decade(p)
    digit(p)

    p = add("dirichlet", "Truncated Dirichlet density sweep over s")
    digit(p)
    powers(p)
    xmax(p)

    p = add("mersenne", "Dirichlet ratio and naive frequency of Mersenne primes")
    powers(p)
    xmax(p)

    p = add("integers", "Dirichlet-style digit ratios over all integers (decades 1..5 unless --decade)")
    decade(p)

    p = add("logdensity", "Log-density decade counts against actual counts")
    nmax(p, "Last decade (default: 5)")

    p = add("histogram", "Equal-width histogram of a decade's primes, or of their log10")
    decade(p)
    bounds(p)
    p.add_argument("--bins", type=_integer, help="Number of bins (default: 30)")
    p.add_argument("--log", action="store_true", default=None, help="Bin log10(p) instead of p")

    p = add("gaps", "Average prime gaps, estimated and observed")
    decade(p, "Per-digit gap table for decade N")
    bounds(p)

    p = add("growth", "Decade-to-decade growth factors of the prime count")
    nmax(p, "Number of steps (default: 10)")

    p = add("logmarch", "log10 of every prime in a range, for plotting")
    bounds(p)

    p = add("dataset", "Leading-digit report of a one-value-per-line file")
    p.add_argument("path", type=Path, help="Dataset file")
    p.add_argument("--reference", choices=[r.value for r in Reference], help="Reference law (default: benford)")

    p = add("density", "Windowed prime density (or log-density) against the PNT curve")
    bounds(p)
    p.add_argument("--width", type=_integer, help="Window width in integers (default: 100)")
    p.add_argument("--log", action="store_true", default=None, help="Primes per unit log10 span")

    p = add("cache", "Show, and optionally fill, the prime decade cache")
    p.add_argument("--warm", type=_integer, metavar="N", help="Sieve and cache decades 0..N first")

    return parser


def _status(config: RunConfig, message: str):
    if config.verbose:
        print(message, file=sys.stderr)


def _hint(error: PrimeDigitsError) -> str:
    if isinstance(error, RangeTooLargeError):
        return error.hint
    if isinstance(error, CacheIntegrityError):
        return "rerun with --refresh-cache, or delete the cache directory"
    return "rerun with --verbose for details"


def run(argv: Optional[Sequence[str]] = None) -> int:
    """
    Parse arguments, build the report and write it.

    Args:
        argv: Arguments without the program name

    Returns:
        Exit status: 0 success, 1 computation error, 2 usage error
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2

    try:
        config = RunConfig(**{key: value for key, value in vars(args).items() if value is not None})
    except ValidationError as e:
        for error in e.errors():
            location = ".".join(str(part) for part in error["loc"]) or args.subcommand
            print(f"❌ Invalid arguments ({location}): {error['msg']}", file=sys.stderr)
        return 2

    package_logger = logging.getLogger("prime_digits")
    handler = None
    if config.verbose:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter("%(asctime)s %(levelname)s %(name)s: %(message)s"))
        package_logger.addHandler(handler)
        package_logger.setLevel(logging.INFO)

    try:
        engine = PrimeEngine(config.settings())
        _status(config, f"🔢 {config.subcommand.value} (capacity {engine.capacity:,})")
        if engine.cache is not None:
            _status(config, f"💾 Prime cache: {engine.cache.base_dir}")

        report = HANDLERS[config.subcommand](config, engine)
        text = report.render(config.format)
        if config.out:
            config.out.write_text(text, encoding="utf-8")
            _status(config, f"✅ Wrote {len(report.rows)} rows to {config.out}")
        else:
            sys.stdout.write(text)
            _status(config, f"✅ {len(report.rows)} rows")

    except PrimeDigitsError as e:
        print(f"❌ Error: {e}", file=sys.stderr)
        print(f"💡 {_hint(e)}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"❌ Error: cannot write report: {e}", file=sys.stderr)
        return 1
    finally:
        if handler is not None:
            package_logger.removeHandler(handler)

    return 0


def main() -> int:
    """Console entry point."""
    return run(sys.argv[1:])


if __name__ == "__main__":
    exit(main())
