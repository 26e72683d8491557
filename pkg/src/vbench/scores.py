"""The accuracy score and its companions.

score = N Var(E) / (E - E_inf)^2: dimensionless, intensive, zero exactly on
eigenstates, invariant under global energy shifts and coupling rescalings.
Also: the normalized energy error, the exact upper bound on score/error, the
vanishing-infidelity limit of that ratio, and the slope-1 log-log fit.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateDenominatorError,
    DegenerateZeroPointError,
    InsufficientPointsError,
    NonPositivePointError,
    ValidationError,
)


def v_score(energy: float, variance: float, n_dof: int, e_infty: float) -> float:
    """N Var / (E - E_inf)^2."""
    if variance < 0.0:
        raise ValidationError(f"variance must be non-negative, got {variance}")
    if n_dof <= 0:
        raise ValidationError(f"n_dof must be positive, got {n_dof}")
    denom = energy - e_infty
    if denom == 0.0:
        raise DegenerateZeroPointError("energy equals the zero point")
    return n_dof * variance / (denom * denom)


def relative_error(energy: float, e0: float, e_infty: float) -> float:
    """(E - E_0) / (E_inf - E_0): 0 at the exact ground energy, 1 at E_inf."""
    denom = e_infty - e0
    if denom == 0.0:
        raise DegenerateDenominatorError("zero point equals the ground energy")
    return (energy - e0) / denom


def bound_ratio_max(
    energy: float, n_dof: int, e_infty: float, e0: float, e_max: float
) -> float:
    """Upper bound on score/relative_error at fixed mean energy.

    The variance at fixed E is maximized by the two-level mixture of the
    extremal eigenstates, giving N (E_inf - E_0)(E_M - E) / (E_inf - E)^2.
    """
    if e_infty == e0 or e_infty == energy:
        raise DegenerateDenominatorError("zero point degenerate with E or E_0")
    if energy > e_max:
        raise ValidationError("mean energy cannot exceed the top of the spectrum")
    denom = e_infty - energy
    return n_dof * (e_infty - e0) * (e_max - energy) / (denom * denom)


def infidelity_limit_ratio(n_dof: int, delta: float, e0: float, e_infty: float) -> float:
    """Limit of score/relative_error for families whose excited weight
    collapses onto the first level above the ground subspace: N Delta / (E_inf - E_0)."""
    if delta <= 0.0:
        raise ValidationError(f"gap must be positive, got {delta}")
    denom = e_infty - e0
    if denom == 0.0:
        raise DegenerateDenominatorError("zero point equals the ground energy")
    return n_dof * delta / denom


@dataclass(frozen=True)
class FitResult:
    c: float
    residual_rms: float
    n_points: int
    slope_free: float  # diagnostic only; the reported fit fixes slope = 1


def fit_intercept(points) -> FitResult:
    """Least-squares intercept of log10(rel_err) = log10(score) + C.

    With the slope pinned at 1 the optimal C is the mean decade offset;
    residual_rms is the RMS deviation from that line, in decades.
    """
    pts = [(float(v), float(r)) for v, r in points]
    if len(pts) < 2:
        raise InsufficientPointsError(f"need at least 2 points, got {len(pts)}")
    if any(v <= 0.0 or r <= 0.0 for v, r in pts):
        raise NonPositivePointError("log-log fit needs strictly positive points")
    log_v = np.log10([v for v, _ in pts])
    log_r = np.log10([r for _, r in pts])
    offsets = log_r - log_v
    c = float(offsets.mean())
    residual_rms = float(np.sqrt(np.mean((offsets - c) ** 2)))
    slope_free = float(np.polyfit(log_v, log_r, 1)[0]) if len(pts) > 1 else 1.0
    return FitResult(c=c, residual_rms=residual_rms, n_points=len(pts), slope_free=slope_free)
