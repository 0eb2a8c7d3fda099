"""Bisection root finding with optional bracket expansion.

All target functions in this package are monotone on their brackets, so
plain bisection is preferred over faster but less robust schemes.
"""

from __future__ import annotations

from typing import Callable

from .errors import NoRootError

ABS_TOL = 1e-10
MAX_ITER = 200


def bisect_root(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    *,
    tol: float = ABS_TOL,
    max_iter: int = MAX_ITER,
    expand: bool = False,
    what: str = "root",
) -> float:
    """Find x in [lo, hi] with |f(x)| < tol by bisection.

    With expand=True the upper endpoint is doubled (up to 60 times) until
    the bracket straddles a sign change. Raises NoRootError if no sign
    change can be established.
    """
    f_lo = f(lo)
    f_hi = f(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if expand:
        attempts = 0
        while f_lo * f_hi > 0.0 and attempts < 60:
            lo, f_lo = hi, f_hi
            hi *= 2.0
            f_hi = f(hi)
            attempts += 1
    if f_lo * f_hi > 0.0:
        raise NoRootError(what, lo, hi, f_lo, f_hi)
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        f_mid = f(mid)
        if abs(f_mid) < tol or (hi - lo) < 1e-16 * max(1.0, abs(mid)):
            return mid
        if f_lo * f_mid <= 0.0:
            hi, f_hi = mid, f_mid
        else:
            lo, f_lo = mid, f_mid
    return 0.5 * (lo + hi)
