"""Circuit optimization with multi-start, warm starts, and depth nesting.

Gradients come from an adjoint reverse sweep (a few circuit passes total);
the two-point shift rule for the rotation angles and central finite
differences for the evolution-block angles are kept as the cross-checked
reference path. Minimization is seeded multi-start L-BFGS; each depth of a
study is additionally warm-started by zero-padding the previous optimum
(an exact embedding for both families, making best-of-starts energies
non-increasing in depth) and, for the hv family, by schedule interpolation,
which tracks the smooth optimum branch of alternating-evolution circuits.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.optimize

from ..einfty import einfty_analytic
from ..errors import ValidationError
from ..hamiltonian import HamiltonianSpec
from ..results import VariationalResult
from ..scores import v_score
from .circuits import (
    QuantumState,
    circuit_energy_and_variance,
    hv_adjoint_gradient,
    hv_states,
    rcx_adjoint_gradient,
    rcx_states,
    tfim_energies,
)

_FD_EPS = 1e-6
_SHIFT = 0.5 * np.pi
MAX_QUBITS = 16


@dataclass(frozen=True)
class CircuitAnsatzKind:
    kind: str  # "rcx" | "hv"
    depth: int

    def __post_init__(self):
        if self.kind not in ("rcx", "hv"):
            raise ValidationError(f"unknown circuit ansatz {self.kind!r}")
        if self.depth < 1:
            raise ValidationError("depth must be >= 1")

    def n_params(self, n_qubits: int) -> int:
        return n_qubits * (self.depth + 1) if self.kind == "rcx" else 2 * self.depth


def _batch_states(spec: HamiltonianSpec, kind: CircuitAnsatzKind, thetas: np.ndarray):
    n_qubits = spec.lattice.n_sites
    if kind.kind == "rcx":
        return rcx_states(n_qubits, kind.depth, thetas)
    return hv_states(n_qubits, kind.depth, thetas, spec.lattice.nn_bonds)


def batch_energies(spec: HamiltonianSpec, kind: CircuitAnsatzKind, thetas: np.ndarray) -> np.ndarray:
    return tfim_energies(_batch_states(spec, kind, np.atleast_2d(thetas)), spec)


def vqe_gradient(
    spec: HamiltonianSpec, kind: CircuitAnsatzKind, theta: np.ndarray, method: str = "adjoint"
) -> np.ndarray:
    """Energy gradient at theta.

    method "adjoint": reverse sweep (default, used by the optimizer).
    method "shift": two-point shift rule (rcx) / central differences (hv),
    batched over parameters; the reference the adjoint path is tested against.
    """
    theta = np.asarray(theta, dtype=np.float64)
    if method == "adjoint":
        if kind.kind == "rcx":
            return rcx_adjoint_gradient(spec, kind.depth, theta)
        return hv_adjoint_gradient(spec, kind.depth, theta, spec.lattice.nn_bonds)
    if method != "shift":
        raise ValidationError(f"unknown gradient method {method!r}")
    n = theta.shape[0]
    delta = _SHIFT if kind.kind == "rcx" else _FD_EPS
    shifted = np.concatenate([np.tile(theta, (n, 1)), np.tile(theta, (n, 1))])
    shifted[np.arange(n), np.arange(n)] += delta
    shifted[n + np.arange(n), np.arange(n)] -= delta
    energies = batch_energies(spec, kind, shifted)
    if kind.kind == "rcx":
        return (energies[:n] - energies[n:]) / 2.0
    return (energies[:n] - energies[n:]) / (2.0 * _FD_EPS)


def _minimize(spec, kind, theta0, max_iterations, trace=None):
    def objective(theta):
        energy = float(batch_energies(spec, kind, theta[None, :])[0])
        if trace is not None:
            trace.append(energy)
        return energy, vqe_gradient(spec, kind, theta)

    result = scipy.optimize.minimize(
        objective,
        np.asarray(theta0, dtype=np.float64),
        jac=True,
        method="L-BFGS-B",
        options={"maxiter": max_iterations, "ftol": 1e-15, "gtol": 1e-10},
    )
    return float(result.fun), result.x, int(result.nit)


def interpolate_schedule(theta: np.ndarray, depth_from: int, depth_to: int) -> np.ndarray:
    """Resample an hv angle schedule onto a different block count."""
    theta = np.asarray(theta, dtype=np.float64)
    old = (np.arange(depth_from) + 0.5) / depth_from
    new = (np.arange(depth_to) + 0.5) / depth_to
    out = np.empty(2 * depth_to)
    out[0::2] = np.interp(new, old, theta[0::2])
    out[1::2] = np.interp(new, old, theta[1::2])
    return out


def embed_parameters(
    kind: str, theta: np.ndarray, depth_from: int, depth_to: int, n_qubits: int
) -> np.ndarray:
    """Zero-pad a depth d optimum into the depth d' > d parameter space.

    rcx: leading zero rotation layers act as the identity on |0...0> (the
    CNOT ladder fixes it), so padding goes in front. hv: zero blocks are the
    identity anywhere, so padding is appended. Both embeddings reproduce the
    shallower state exactly.
    """
    theta = np.asarray(theta, dtype=np.float64)
    if depth_to < depth_from:
        raise ValidationError("can only embed into deeper circuits")
    if kind == "rcx":
        return np.concatenate([np.zeros((depth_to - depth_from) * n_qubits), theta])
    return np.concatenate([theta, np.zeros(2 * (depth_to - depth_from))])


def _hv_bootstrap(spec: HamiltonianSpec, depth: int, max_iterations: int) -> np.ndarray:
    """Iteratively deepened schedule: optimize one block, interpolate up."""
    best = None
    for g in (0.2, 0.5, 0.8):
        for b in (0.2, 0.5, 0.8):
            e, th, _ = _minimize(spec, CircuitAnsatzKind("hv", 1), np.array([g, b]), 200)
            if best is None or e < best[0]:
                best = (e, th)
    theta = best[1]
    d = 1
    while d < depth:
        d_next = min(depth, d + max(1, d // 2))
        theta0 = interpolate_schedule(theta, d, d_next)
        _, theta, _ = _minimize(spec, CircuitAnsatzKind("hv", d_next), theta0, max_iterations)
        d = d_next
    return theta


def optimize_vqe(
    spec: HamiltonianSpec,
    kind: CircuitAnsatzKind,
    *,
    n_starts: int = 5,
    max_iterations: int = 500,
    seed: int = 0,
    warm_starts=(),
    init_scale: float = 0.3,
) -> VariationalResult:
    """Minimize the circuit energy from several seeded starts (plus any warm
    starts) and report exact moments and the score at the best angles found.

    The hv family always adds an iteratively-deepened schedule start, which
    is how alternating-evolution circuits avoid their shallow local minima.
    """
    if max_iterations < 1:
        raise ValidationError("iteration budget must be >= 1")
    n_qubits = spec.lattice.n_sites
    if n_qubits > MAX_QUBITS:
        raise ValidationError(f"statevector circuits capped at {MAX_QUBITS} qubits")
    n_params = kind.n_params(n_qubits)
    starts = [np.asarray(w, dtype=np.float64) for w in warm_starts]
    for w in starts:
        if w.shape != (n_params,):
            raise ValidationError("warm start has the wrong parameter count")
    if kind.kind == "hv":
        starts.append(_hv_bootstrap(spec, kind.depth, max_iterations))
    master = np.random.SeedSequence((seed, kind.depth, 0 if kind.kind == "rcx" else 1))
    for child in master.spawn(n_starts):
        starts.append(np.random.default_rng(child).normal(0.0, init_scale, n_params))
    best = None
    total_iterations = 0
    trace: list[float] = []
    for theta0 in starts:
        start_trace: list[float] = []
        energy, theta, iterations = _minimize(spec, kind, theta0, max_iterations, start_trace)
        # L-BFGS line searches can end above the best point seen; keep the best
        e_start = float(batch_energies(spec, kind, theta0[None, :])[0])
        if e_start < energy:
            energy, theta = e_start, np.asarray(theta0, dtype=np.float64)
        total_iterations += iterations
        if best is None or energy < best[0]:
            best = (energy, theta)
            trace = start_trace
    _, best_theta = best
    state = _batch_states(spec, kind, best_theta[None, :])[0]
    energy, variance = circuit_energy_and_variance(QuantumState(n_qubits, state), spec)
    score = v_score(energy, variance, spec.n_dof, einfty_analytic(spec).value)
    return VariationalResult(
        energy_mean=energy,
        energy_variance=variance,
        energy_std_error=0.0,
        v_score=score,
        acceptance_rate=None,
        n_parameters=n_params,
        iterations=total_iterations,
        trace=tuple((i, e, float("nan")) for i, e in enumerate(trace)),
        parameters=best_theta,
        metadata={
            "ansatz": kind.kind,
            "depth": str(kind.depth),
            "n_starts": str(len(starts)),
            "optimizer": "multi-start L-BFGS with adjoint gradients",
        },
    )


def depth_study(
    spec: HamiltonianSpec,
    kind_name: str,
    depths,
    *,
    n_starts: int = 5,
    seed: int = 0,
    **optimize_kwargs,
) -> list[VariationalResult]:
    """Optimize one ansatz family over a depth list.

    Each depth is warm-started by the zero-padding embedding of the previous
    optimum (so its best energy can never exceed the previous one) and, for
    hv, by schedule interpolation as well.
    """
    results = []
    prev: tuple[int, np.ndarray] | None = None
    for depth in depths:
        kind = CircuitAnsatzKind(kind_name, int(depth))
        warm = []
        if prev is not None:
            warm.append(
                embed_parameters(kind_name, prev[1], prev[0], int(depth), spec.lattice.n_sites)
            )
            if kind_name == "hv":
                warm.append(interpolate_schedule(prev[1], prev[0], int(depth)))
        result = optimize_vqe(
            spec, kind, n_starts=n_starts, seed=seed, warm_starts=warm, **optimize_kwargs
        )
        results.append(result)
        prev = (int(depth), result.parameters)
    return results
