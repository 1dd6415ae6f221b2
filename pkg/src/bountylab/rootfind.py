"""Bracketing bisection for strictly decreasing scalar functions.

Every fixed-point equation in the package reduces to a root of a strictly
decreasing function g on a known bracket, so plain bisection is exact enough
and immune to the unbounded density derivatives some cost families have.
"""

from __future__ import annotations

from typing import Callable

MAX_ITER = 200


def bisect_decreasing(
    g: Callable[[float], float],
    lo: float,
    hi: float,
    x_tol: float = 1e-13,
) -> float:
    """Root of a strictly decreasing ``g`` with g(lo) >= 0 >= g(hi).

    Runs to an absolute interval width of ``x_tol`` (a couple of orders
    tighter than the 1e-10 the callers promise, so that fixed-point residuals
    also land within tolerance), capped at 200 iterations.
    """
    if not lo <= hi:
        raise ValueError("empty bracket")
    g_lo = g(lo)
    if g_lo <= 0.0:
        return lo
    if g(hi) >= 0.0:
        return hi
    for _ in range(MAX_ITER):
        mid = 0.5 * (lo + hi)
        if hi - lo <= x_tol or mid <= lo or mid >= hi:
            break
        if g(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
