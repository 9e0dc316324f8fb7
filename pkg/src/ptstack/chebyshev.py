"""Stable Chebyshev polynomials of the first and second kind, all regimes.

The pair (T_n(x), U_{n-1}(x)) gives the closed form of the n-th power of a
unimodular 2x2 matrix.  Fine-layer stack limits push x exponentially close to
1 from below, exactly where arccos loses most of its relative precision, so
everything here is evaluated through the distance ``gap = 1 - x`` using the
cancellation-free identities

    arccos(1 - gap)  = 2*arcsin(sqrt(gap/2))        0 <= gap <= 2
    sin(arccos(x))   = sqrt(gap*(2 - gap))
    arccosh(1 + u)   = 2*arcsinh(sqrt(u/2))         u = -gap >= 0
    sinh(arccosh(x)) = sqrt(u*(u + 2))

Callers that know ``gap`` to full relative precision (the unit-cell elements
do) should use :func:`cheb_pair_from_gap`; going through ``x = 1 - gap`` in
double precision first would throw that precision away.  Arguments x < 0 are
reflected to |x| with the parity signs (-1)^n and (-1)^(n-1); the subtractions
involved (2 - gap, gap - 2) are exact in floating point.

Values whose true magnitude exceeds the double range (|x| > 1 with
n*arccosh|x| above ~710) overflow to +/-inf with the correct sign.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class ChebyshevPair:
    """T_n(x) and U_{n-1}(x) evaluated together from one angle."""

    n: int
    x: float
    t_n: float
    u_n_minus_1: float


def _cosh_safe(y: float) -> float:
    try:
        return math.cosh(y)
    except OverflowError:
        return math.inf


def _sinh_safe(y: float) -> float:
    try:
        return math.sinh(y)
    except OverflowError:
        return math.copysign(math.inf, y)


def _eval_pair(n: int, gap: float) -> tuple[float, float]:
    if n == 0:
        return 1.0, 0.0
    sign_t = 1.0
    sign_u = 1.0
    if gap > 1.0:
        # x < 0: reflect to x' = -x = gap - 1, i.e. gap' = 2 - gap (exact).
        gap = 2.0 - gap
        if n % 2:
            sign_t = -1.0
        else:
            sign_u = -1.0
    if gap < 0.0:
        u_arg = -gap
        theta_h = 2.0 * math.asinh(math.sqrt(0.5 * u_arg))
        t = _cosh_safe(n * theta_h)
        u = _sinh_safe(n * theta_h) / math.sqrt(u_arg * (u_arg + 2.0))
    else:
        theta = 2.0 * math.asin(math.sqrt(0.5 * gap))
        sin_theta = math.sqrt(gap * (2.0 - gap))
        t = math.cos(n * theta)
        u = float(n) if sin_theta == 0.0 else math.sin(n * theta) / sin_theta
    return sign_t * t, sign_u * u


def cheb_pair_from_gap(n: int, gap: float) -> ChebyshevPair:
    """T_n(1 - gap) and U_{n-1}(1 - gap), taking ``gap`` at face value.

    This is the precision-preserving entry point: for x within a few ulps of
    1, pass the exactly known ``1 - x`` here instead of rounding x first.
    Any real ``gap`` is accepted (gap < 0 means x > 1, gap > 2 means x < -1).
    """
    n = _check_degree(n)
    gap = float(gap)
    if math.isnan(gap):
        raise ValueError("gap must not be NaN")
    t, u = _eval_pair(n, gap)
    return ChebyshevPair(n=n, x=1.0 - gap, t_n=t, u_n_minus_1=u)


def cheb_pair(n: int, x: float) -> ChebyshevPair:
    """T_n(x) and U_{n-1}(x) for real x of any magnitude."""
    x = float(x)
    if math.isnan(x):
        raise ValueError("x must not be NaN")
    n = _check_degree(n)
    t, u = _eval_pair(n, 1.0 - x)
    return ChebyshevPair(n=n, x=x, t_n=t, u_n_minus_1=u)


def cheb_t(n: int, x: float) -> float:
    """Chebyshev polynomial of the first kind, T_n(x)."""
    return cheb_pair(n, x).t_n


def cheb_u(n: int, x: float) -> float:
    """Chebyshev polynomial of the second kind, U_n(x)."""
    return cheb_pair(_check_degree(n) + 1, x).u_n_minus_1


def _check_degree(n: int) -> int:
    if n != int(n):
        raise ValueError(f"polynomial degree must be an integer, got {n!r}")
    n = int(n)
    if n < 0:
        raise ValueError(f"polynomial degree must be >= 0, got {n}")
    return n
