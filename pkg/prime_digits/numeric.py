"""Small numeric helpers shared by the estimators."""

import math
from decimal import ROUND_HALF_UP, Decimal, localcontext
from typing import Callable, Iterable, Optional, Union

from .errors import DomainError


def round_half_away(x: Union[float, Decimal], places: int = 0) -> float:
    """Round to `places` decimals with ties going away from zero.

    The tie test uses the exact binary value of x, so 903.5 becomes 904
    and 5.25 becomes 5.3.

    Raises:
        DomainError: If x is infinite or NaN
    """
    value = Decimal(x)
    if not value.is_finite():
        raise DomainError(f"cannot round a non-finite value {x}")
    quantum = Decimal(1).scaleb(-places)
    with localcontext() as ctx:
        ctx.prec = max(ctx.prec, value.adjusted() + places + 2)
        return float(value.quantize(quantum, rounding=ROUND_HALF_UP))


def round_to_integer(x: Decimal) -> int:
    """Nearest integer to x with ties away from zero, exact at any magnitude."""
    if not x.is_finite():
        raise DomainError(f"cannot round a non-finite value {x}")
    return int(x.to_integral_value(rounding=ROUND_HALF_UP))


def adaptive_simpson(func: Callable[[float], float], a: float, b: float,
                     rel_tol: float = 1e-9, breakpoints: Optional[Iterable[float]] = None,
                     max_depth: int = 50) -> float:
    """
    Adaptive composite Simpson quadrature of func over [a, b].

    The interval is first cut at the given breakpoints; every panel is then
    bisected until the Richardson error estimate of its two halves falls
    below its share of the tolerance. Panel results are summed with fsum.

    Args:
        func: Integrand, smooth on [a, b]
        a: Lower limit
        b: Upper limit
        rel_tol: Target error relative to the magnitude of the integral
        breakpoints: Interior points where the interval is pre-split
        max_depth: Bisection limit per panel

    Returns:
        The integral estimate
    """
    if a == b:
        return 0.0
    if a > b:
        return -adaptive_simpson(func, b, a, rel_tol, breakpoints, max_depth)

    edges = [a, *sorted(p for p in (breakpoints or ()) if a < p < b), b]
    panels = []
    for lo, hi in zip(edges, edges[1:]):
        mid = (lo + hi) / 2
        flo, fmid, fhi = func(lo), func(mid), func(hi)
        panels.append((lo, hi, flo, fmid, fhi, (hi - lo) / 6 * (flo + 4 * fmid + fhi)))

    tolerance = rel_tol * abs(math.fsum(p[5] for p in panels)) or rel_tol
    stack = [(*panel, tolerance * (panel[1] - panel[0]) / (b - a), 0) for panel in panels]
    parts = []
    while stack:
        lo, hi, flo, fmid, fhi, whole, eps, depth = stack.pop()
        mid = (lo + hi) / 2
        flm, frm = func((lo + mid) / 2), func((mid + hi) / 2)
        left = (mid - lo) / 6 * (flo + 4 * flm + fmid)
        right = (hi - mid) / 6 * (fmid + 4 * frm + fhi)
        delta = left + right - whole
        if depth >= max_depth or abs(delta) <= 15 * eps:
            parts.append(left + right + delta / 15)
        else:
            stack.append((lo, mid, flo, flm, fmid, left, eps / 2, depth + 1))
            stack.append((mid, hi, fmid, frm, fhi, right, eps / 2, depth + 1))
    return math.fsum(parts)
