"""Domain types and 2x2 transfer-matrix algebra for one-dimensional scattering.

Conventions used throughout the package (natural units hbar = 1, 2m = 1):

* A scattering state behaves asymptotically as ``a*exp(ikx) + b*exp(-ikx)``
  on either side of the potential, with wave number ``k > 0``.
* The transfer matrix maps the left-side amplitude pair ``(a-, b-)`` to the
  right-side pair ``(a+, b+)``.
* Amplitudes are referenced to ``x = 0`` ("global coordinates"): a scatterer
  carries its own position inside the off-diagonal phases of its matrix, so
  matrices of non-overlapping scatterers compose by plain multiplication,
  rightmost scatterer leftmost in the product.
* Transmission and reflection follow ``t = 1/m22``, ``r_left = -m12/m22``,
  ``r_right = m21/m22`` (see :mod:`ptstack.scattering`).

Every matrix produced from a physical potential is unimodular (det = 1) up to
rounding; unimodularity is asserted in tests rather than enforced here so that
numerical drift stays measurable.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

# Relative slack when checking that stacked layers do not overlap; offsets
# built as i*width can differ from accumulated sums by a few ulps.
_OVERLAP_RTOL = 1e-9


class WaveNumberMismatchError(ValueError):
    """Combining transfer matrices evaluated at different wave numbers."""


def check_wave_number(k: float) -> float:
    """Validate a scattering wave number and return it as a float.

    Only real k > 0 is supported; k = 0 is rejected because the cell
    quantities k/rho + rho/k and their relatives diverge there.
    """
    k = float(k)
    if not math.isfinite(k) or k <= 0.0:
        raise ValueError(f"wave number must be finite and > 0, got {k!r}")
    return k


@dataclass(frozen=True)
class Layer:
    """One rectangular slab: complex height over [offset, offset + width)."""

    height: complex
    width: float
    offset: float = 0.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.width) and self.width > 0.0):
            raise ValueError(f"layer width must be finite and > 0, got {self.width!r}")
        if not math.isfinite(self.offset):
            raise ValueError(f"layer offset must be finite, got {self.offset!r}")
        h = complex(self.height)
        if not (math.isfinite(h.real) and math.isfinite(h.imag)):
            raise ValueError(f"layer height must be finite, got {self.height!r}")

    @property
    def right_edge(self) -> float:
        return self.offset + self.width


@dataclass(frozen=True)
class PotentialStack:
    """Ordered, non-overlapping layers; gaps between layers are free space."""

    layers: tuple[Layer, ...]

    def __init__(self, layers) -> None:
        ordered = tuple(sorted(layers, key=lambda layer: layer.offset))
        span = ordered[-1].right_edge - ordered[0].offset if ordered else 0.0
        slack = _OVERLAP_RTOL * max(span, 1.0)
        for left, right in zip(ordered, ordered[1:]):
            if right.offset < left.right_edge - slack:
                raise ValueError(
                    f"layers overlap: [{left.offset}, {left.right_edge}] and "
                    f"[{right.offset}, {right.right_edge}]"
                )
        object.__setattr__(self, "layers", ordered)

    def __len__(self) -> int:
        return len(self.layers)

    @property
    def left_edge(self) -> float:
        return self.layers[0].offset if self.layers else 0.0

    @property
    def right_edge(self) -> float:
        return self.layers[-1].right_edge if self.layers else 0.0

    @property
    def total_support(self) -> float:
        """Distance between the outermost edges (zero for an empty stack)."""
        return self.right_edge - self.left_edge


@dataclass(frozen=True)
class TransferMatrix:
    """2x2 complex transfer matrix tagged with the wave number it was built at."""

    m11: complex
    m12: complex
    m21: complex
    m22: complex
    k: float

    @classmethod
    def identity(cls, k: float) -> "TransferMatrix":
        return cls(1.0 + 0.0j, 0.0j, 0.0j, 1.0 + 0.0j, float(k))

    @classmethod
    def from_array(cls, m, k: float) -> "TransferMatrix":
        m = np.asarray(m)
        return cls(complex(m[0, 0]), complex(m[0, 1]), complex(m[1, 0]), complex(m[1, 1]), float(k))

    def as_array(self) -> np.ndarray:
        return np.array([[self.m11, self.m12], [self.m21, self.m22]], dtype=complex)

    @property
    def det(self) -> complex:
        return self.m11 * self.m22 - self.m12 * self.m21


@dataclass(frozen=True)
class PlaneWaveAmplitudes:
    """Asymptotic plane-wave coefficients on both sides of a scatterer."""

    a_plus: complex
    b_plus: complex
    a_minus: complex
    b_minus: complex

    @classmethod
    def from_left_side(cls, m: TransferMatrix, a_minus: complex, b_minus: complex) -> "PlaneWaveAmplitudes":
        """Propagate a left-side amplitude pair through ``m``."""
        a_plus = m.m11 * a_minus + m.m12 * b_minus
        b_plus = m.m21 * a_minus + m.m22 * b_minus
        return cls(a_plus, b_plus, a_minus, b_minus)


def mat_multiply(m2: TransferMatrix, m1: TransferMatrix) -> TransferMatrix:
    """Return m2 . m1, the matrix of scatterer 1 followed by scatterer 2.

    Raises :class:`WaveNumberMismatchError` if the two matrices were not
    evaluated at the same wave number.
    """
    if m1.k != m2.k:
        raise WaveNumberMismatchError(
            f"cannot compose matrices at different wave numbers ({m1.k!r} vs {m2.k!r})"
        )
    return TransferMatrix(
        m2.m11 * m1.m11 + m2.m12 * m1.m21,
        m2.m11 * m1.m12 + m2.m12 * m1.m22,
        m2.m21 * m1.m11 + m2.m22 * m1.m21,
        m2.m21 * m1.m12 + m2.m22 * m1.m22,
        m1.k,
    )


def mat_power_direct(m: TransferMatrix, n: int) -> TransferMatrix:
    """n-fold repeated product of ``m`` with itself.

    Deliberately a plain left-multiplication loop: this is the reference the
    Chebyshev closed form is validated against, so it must not share that
    shortcut.  ``n = 0`` returns the identity (degenerate but well defined).
    """
    n = int(n)
    if n < 0:
        raise ValueError(f"matrix power requires n >= 0, got {n}")
    a11, a12, a21, a22 = 1.0 + 0.0j, 0.0j, 0.0j, 1.0 + 0.0j
    for _ in range(n):
        a11, a12, a21, a22 = (
            m.m11 * a11 + m.m12 * a21,
            m.m11 * a12 + m.m12 * a22,
            m.m21 * a11 + m.m22 * a21,
            m.m21 * a12 + m.m22 * a22,
        )
    return TransferMatrix(a11, a12, a21, a22, m.k)


def translate(m: TransferMatrix, d: float) -> TransferMatrix:
    """Transfer matrix of the same scatterer shifted right by ``d``.

    Conjugation by the diagonal phase matrix diag(exp(-ikd), exp(ikd)):
    diagonals are untouched, so |t| and both |r| are unchanged.
    """
    phase = cmath.exp(-2j * m.k * d)
    return TransferMatrix(m.m11, m.m12 * phase, m.m21 / phase, m.m22, m.k)
