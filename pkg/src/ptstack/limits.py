"""Fine-layer limit: leading-order predictors, convergence measurements, and
the generalized (unbalanced) alternating stack.

For the balanced gain/loss stack at fixed total length L, the N-cell matrix
tends to the identity as N grows.  The leading orders, with b = L/(2N):

    xi        -> 1 - (kL)^2 / (2 N^2)
    chi       -> kL / N
    arccos xi -> kL / N
    T_N(xi)   -> cos kL
    U_{N-1}   -> sin kL / sin(kL/N)   (~ N sin(kL)/(kL))
    chi*U     -> sin kL
    T_N(xi) + i chi U_{N-1}(xi) -> e^{ikL}       (diagonals -> 1)
    off-diagonal magnitude      -> V b/(2k) * sin kL  -> 0 like 1/N

Convergence is measured on the matrix itself (max-norm against the identity),
not only on the transmission: T -> 1 alone can mask residual off-diagonal
structure.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import least_squares

from .cell import barrier_matrix
from .core import TransferMatrix, check_wave_number
from .stack import PeriodicSpec, build_alternating, compose_stack, periodic_matrix


@dataclass(frozen=True)
class AsymptoticPrediction:
    """Leading-order values of the cell and stack quantities at one (k, N)."""

    k: float
    v: float
    total_length: float
    n: int
    xi_pred: float
    chi_pred: float
    arccos_xi_pred: float
    t_n_pred: float
    u_pred: float
    u_pred_small_angle: float
    chi_u_pred: float
    diag_pred: complex
    offdiag_scale_pred: float


@dataclass(frozen=True)
class ConvergenceRecord:
    """Deviation of the N-cell matrix from its limit at one schedule point."""

    n: int
    k: float
    deviation_inf: float
    offdiag_measured: float
    offdiag_predicted: float
    diag_measured_err: float
    absdet_err: float


def predict_asymptotics(k: float, v: float, total_length: float, n: int) -> AsymptoticPrediction:
    """Populate every leading-order predictor for the balanced stack.

    ``u_pred`` keeps the exact sin(kL/N) denominator; ``u_pred_small_angle``
    replaces it by kL/N.  Tests and ratio checks use the exact form.
    """
    k = check_wave_number(k)
    n = int(n)
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    total_length = float(total_length)
    v = float(v)
    kl = k * total_length
    b = total_length / (2.0 * n)
    return AsymptoticPrediction(
        k=k,
        v=v,
        total_length=total_length,
        n=n,
        xi_pred=1.0 - kl * kl / (2.0 * n * n),
        chi_pred=kl / n,
        arccos_xi_pred=kl / n,
        t_n_pred=math.cos(kl),
        u_pred=math.sin(kl) / math.sin(kl / n),
        u_pred_small_angle=n * math.sin(kl) / kl,
        chi_u_pred=math.sin(kl),
        diag_pred=cmath.exp(1j * kl),
        offdiag_scale_pred=v * b / (2.0 * k) * math.sin(kl),
    )


def _deviation_record(n: int, k: float, m: TransferMatrix, ref: TransferMatrix, offdiag_predicted: float) -> ConvergenceRecord:
    d11 = abs(m.m11 - ref.m11)
    d12 = abs(m.m12 - ref.m12)
    d21 = abs(m.m21 - ref.m21)
    d22 = abs(m.m22 - ref.m22)
    return ConvergenceRecord(
        n=n,
        k=k,
        deviation_inf=max(d11, d12, d21, d22),
        offdiag_measured=max(d12, d21),
        offdiag_predicted=offdiag_predicted,
        diag_measured_err=max(d11, d22),
        absdet_err=abs(m.det - 1.0),
    )


def _check_schedule(n_schedule: Sequence[int]) -> list[int]:
    ns = [int(n) for n in n_schedule]
    if not ns:
        raise ValueError("n_schedule must not be empty")
    if any(b <= a for a, b in zip(ns, ns[1:])):
        raise ValueError(f"n_schedule must be strictly increasing, got {ns}")
    if ns[0] < 1:
        raise ValueError("n_schedule entries must be >= 1")
    return ns


def convergence_study(
    k: float, v: float, total_length: float, n_schedule: Sequence[int]
) -> list[ConvergenceRecord]:
    """Deviation of the closed-form N-cell matrix from the identity, per N.

    Off-diagonal magnitudes are recorded next to their leading-order
    prediction |V b/(2k) sin kL| so the ratio can be read off directly.
    """
    k = check_wave_number(k)
    records = []
    identity = TransferMatrix.identity(k)
    for n in _check_schedule(n_schedule):
        spec = PeriodicSpec(v=v, n_cells=n, total_length=total_length)
        m = periodic_matrix(spec, k)
        predicted = abs(predict_asymptotics(k, v, total_length, n).offdiag_scale_pred)
        records.append(_deviation_record(n, k, m, identity, predicted))
    return records


def fit_loglog_slope(ns: Sequence[int], deviations: Sequence[float]) -> float:
    """Least-squares slope of log(deviation) against log(N).

    Deviations are floored at 1e-300 so an exact zero (a matrix that rounds
    to the identity) cannot poison the fit with -inf.
    """
    if len(ns) != len(deviations) or len(ns) < 2:
        raise ValueError("need at least two (N, deviation) pairs")
    devs = np.maximum(np.asarray(deviations, float), 1e-300)
    return float(np.polyfit(np.log(np.asarray(ns, float)), np.log(devs), 1)[0])


@dataclass(frozen=True)
class GeneralizedLimitResult:
    """Fitted constant-barrier equivalent of an unbalanced alternating stack.

    ``effective_height`` minimizes the entrywise least-squares distance
    between the single-barrier matrix of the full length and the composed
    stack at the largest N of the schedule.  Two closed-form candidates are
    carried for comparison: the full uncompensated imbalance
    v1 + i(1-eps) v2 and the arithmetic mean of the two slab heights
    v1 + i(1-eps) v2/2.  ``converged`` is False when the deviation from the
    fitted barrier fails to decrease over the schedule; callers should treat
    the fit as unreliable in that case rather than expect an exception.
    """

    effective_height: complex
    records: tuple[ConvergenceRecord, ...]
    converged: bool
    candidate_full_imbalance: complex
    candidate_mean_height: complex

    @property
    def residual_full_imbalance(self) -> float:
        return abs(self.effective_height - self.candidate_full_imbalance)

    @property
    def residual_mean_height(self) -> float:
        return abs(self.effective_height - self.candidate_mean_height)

    @property
    def closest_candidate(self) -> str:
        if self.residual_mean_height <= self.residual_full_imbalance:
            return "mean_height"
        return "full_imbalance"


def _fit_effective_height(
    target: TransferMatrix, k: float, total_length: float, initial: complex
) -> complex:
    def residuals(p):
        m = barrier_matrix(k, complex(p[0], p[1]), total_length, 0.0)
        diff = (m.m11 - target.m11, m.m12 - target.m12, m.m21 - target.m21, m.m22 - target.m22)
        return [part for z in diff for part in (z.real, z.imag)]

    fit = least_squares(
        residuals,
        x0=[initial.real, initial.imag],
        xtol=1e-15,
        ftol=1e-15,
        gtol=1e-15,
        method="lm",
    )
    return complex(fit.x[0], fit.x[1])


def generalized_limit_study(
    v1: float,
    v2: float,
    eps: float,
    total_length: float,
    n_schedule: Sequence[int],
    k: float,
) -> GeneralizedLimitResult:
    """Fit the fine-layer limit of slabs alternating v1 + i v2 / v1 - i eps v2.

    The stack matrix is built by the explicit product route (the closed form
    only covers the balanced case), the effective height is fitted at the
    largest N, and the per-N deviation from that fitted barrier is recorded.
    """
    k = check_wave_number(k)
    ns = _check_schedule(n_schedule)
    matrices = [
        compose_stack(build_alternating(v1, v2, eps, n, total_length), k) for n in ns
    ]
    mean_height = complex(v1, (1.0 - eps) * v2 / 2.0)
    full_imbalance = complex(v1, (1.0 - eps) * v2)
    effective = _fit_effective_height(matrices[-1], k, total_length, mean_height)
    reference = barrier_matrix(k, effective, total_length, 0.0)
    records = tuple(
        _deviation_record(n, k, m, reference, math.nan) for n, m in zip(ns, matrices)
    )
    deviations = [r.deviation_inf for r in records]
    converged = all(b <= a * 1.05 for a, b in zip(deviations, deviations[1:])) and (
        deviations[-1] < deviations[0]
    )
    return GeneralizedLimitResult(
        effective_height=effective,
        records=records,
        converged=converged,
        candidate_full_imbalance=full_imbalance,
        candidate_mean_height=mean_height,
    )
