"""Closed-form matrices for one rectangular complex barrier and for the
balanced gain/loss unit cell.

The unit cell is a slab of height +iV on [0, b] immediately followed by a slab
of height -iV on [b, 2b] (V > 0).  Which slab comes first is fixed by the
element formulas below: composing the two single-barrier matrices in this
order reproduces the elements exactly, while the reverse order flips the sign
of ``eta``.  The cell matrix has the structure

    [[(xi + i*chi) e^{-2ikb},  i(eta - tau) e^{-2ikb}],
     [ i(eta + tau) e^{2ikb},  (xi - i*chi) e^{2ikb} ]]

with real xi, chi, eta, tau built from

    rho, phi : modulus and phase of sqrt(k^2 + iV) = rho*exp(i*phi),
               rho = (k^4 + V^2)^(1/4), phi = arctan(V/k^2)/2 in (0, pi/4)
    alpha    = b*rho*cos(phi),   beta = b*rho*sin(phi)
    u_pm     = k/rho +- rho/k

Unimodularity holds exactly as xi^2 + chi^2 + eta^2 - tau^2 = 1.

``one_minus_xi`` is carried alongside ``xi`` at full relative precision: the
large-N stack evaluation needs arccos(xi) where xi is within ulps of 1, and
recomputing 1 - xi from the rounded xi would destroy that limit.  The form
used here,

    1 - xi = 2*(cos(phi)*sin(alpha) - sin(phi)*sinh(beta))
             * (cos(phi)*sin(alpha) + sin(phi)*sinh(beta)),

is an exact rewrite of the xi definition (half-angle identities), worst-case
amplification rho^2/k^2 in the first factor.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .core import TransferMatrix, check_wave_number, mat_multiply

# Below this |q*width| the slab propagation uses the series form of
# sin(q w)/q; keeps barrier-top energies (q ~ 0) finite.
_SINC_SWITCH = 1e-4


@dataclass(frozen=True)
class CellParams:
    """Derived real quantities of one gain/loss cell at a given (k, V, b)."""

    k: float
    v: float
    b: float
    rho: float
    phi: float
    alpha: float
    beta: float
    u_plus: float
    u_minus: float
    xi: float
    chi: float
    eta: float
    tau: float
    one_minus_xi: float
    k1: complex
    k2: complex


def wave_params(k: float, v: float, b: float) -> tuple[float, float, float, float, float, float]:
    """(rho, phi, alpha, beta, u_plus, u_minus) for a cell at (k, V, b)."""
    k = check_wave_number(k)
    v = float(v)
    b = float(b)
    if not (math.isfinite(v) and v > 0.0):
        raise ValueError(f"gain/loss magnitude V must be finite and > 0, got {v!r}")
    if not (math.isfinite(b) and b > 0.0):
        raise ValueError(f"slab width b must be finite and > 0, got {b!r}")
    rho = (k ** 4 + v * v) ** 0.25
    phi = 0.5 * math.atan(v / (k * k))
    alpha = b * rho * math.cos(phi)
    beta = b * rho * math.sin(phi)
    u_plus = k / rho + rho / k
    u_minus = k / rho - rho / k
    return rho, phi, alpha, beta, u_plus, u_minus


def unit_cell_elements(k: float, v: float, b: float) -> CellParams:
    """All derived cell quantities, including the matrix elements."""
    rho, phi, alpha, beta, u_plus, u_minus = wave_params(k, v, b)
    cos_phi = math.cos(phi)
    sin_phi = math.sin(phi)
    sin_a = math.sin(alpha)
    sinh_b = math.sinh(beta)

    one_minus_xi = 2.0 * (cos_phi * sin_a - sin_phi * sinh_b) * (cos_phi * sin_a + sin_phi * sinh_b)
    xi = 1.0 - one_minus_xi
    chi = 0.5 * (
        u_plus * cos_phi * math.sin(2.0 * alpha) + u_minus * sin_phi * math.sinh(2.0 * beta)
    )
    # (cosh(2b) - cos(2a))/2 == sin(a)^2 + sinh(b)^2, which avoids the 1 - 1
    # cancellation at small widths.
    eta = (sin_a * sin_a + sinh_b * sinh_b) * math.sin(2.0 * phi)
    tau = 0.5 * (
        u_plus * sin_phi * math.sinh(2.0 * beta) + u_minus * cos_phi * math.sin(2.0 * alpha)
    )
    return CellParams(
        k=float(k),
        v=float(v),
        b=float(b),
        rho=rho,
        phi=phi,
        alpha=alpha,
        beta=beta,
        u_plus=u_plus,
        u_minus=u_minus,
        xi=xi,
        chi=chi,
        eta=eta,
        tau=tau,
        one_minus_xi=one_minus_xi,
        k1=rho * cmath.exp(-1j * phi),
        k2=rho * cmath.exp(1j * phi),
    )


def unit_cell_matrix(k: float, v: float, b: float) -> TransferMatrix:
    """Transfer matrix of one gain/loss cell occupying [0, 2b]."""
    p = unit_cell_elements(k, v, b)
    phase = cmath.exp(-2j * p.k * p.b)
    return TransferMatrix(
        (p.xi + 1j * p.chi) * phase,
        1j * (p.eta - p.tau) * phase,
        1j * (p.eta + p.tau) / phase,
        (p.xi - 1j * p.chi) / phase,
        p.k,
    )


def _propagation_terms(q2: complex, width: float) -> tuple[complex, complex]:
    """cos(q*width) and sin(q*width)/q for q = sqrt(q2).

    Both are even in q, so the square-root branch is irrelevant.  Near q = 0
    (barrier-top energy) the quotient switches to its series to avoid 0/0.
    """
    q = cmath.sqrt(q2)
    z = q * width
    c = cmath.cos(z)
    if abs(z) < _SINC_SWITCH:
        z2 = z * z
        s_over_q = width * (1.0 - z2 / 6.0 * (1.0 - z2 / 20.0))
    else:
        s_over_q = cmath.sin(z) / q
    return c, s_over_q


def barrier_matrix(k: float, height: complex, width: float, offset: float = 0.0) -> TransferMatrix:
    """Transfer matrix of a single slab of complex ``height`` at ``offset``.

    Global coordinates: the slab occupies [offset, offset + width] and the
    amplitudes stay referenced to x = 0.  For real height and k^2 > height
    this reduces to the textbook rectangular-barrier matrix.
    """
    k = check_wave_number(k)
    width = float(width)
    if not (math.isfinite(width) and width > 0.0):
        raise ValueError(f"barrier width must be finite and > 0, got {width!r}")
    offset = float(offset)
    height = complex(height)
    q2 = k * k - height
    c, s_over_q = _propagation_terms(q2, width)
    diag = 0.5j * ((k * k + q2) / k) * s_over_q
    off = 0.5j * (height / k) * s_over_q
    edge_phase = cmath.exp(-1j * k * width)
    position_phase = cmath.exp(-1j * k * (width + 2.0 * offset))
    return TransferMatrix(
        (c + diag) * edge_phase,
        -off * position_phase,
        off / position_phase,
        (c - diag) / edge_phase,
        k,
    )


def cell_from_barriers(k: float, v: float, b: float) -> TransferMatrix:
    """The unit cell assembled as two single-slab matrices (+iV then -iV).

    Reference route for the closed form in :func:`unit_cell_matrix`.
    """
    first = barrier_matrix(k, 1j * v, b, 0.0)
    second = barrier_matrix(k, -1j * v, b, b)
    return mat_multiply(second, first)
