"""Exact solvers: Lanczos ground states, dense spectra, and exact moments.

This is the oracle layer: everything here is deterministic given the seed and
accurate to the stated tolerances, so variational results can be validated
against it.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import DimensionOverflowError, ValidationError, ZeroVectorError
from .hamiltonian import HamiltonianSpec, StateVector, apply, to_dense

DENSE_CAP = 4096
_LANCZOS_DIM_CAP = 1 << 22


@dataclass(frozen=True)
class LanczosConfig:
    tolerance: float = 1e-10
    max_iterations: int = 500
    full_reorthogonalization: bool = True
    seed: int = 0

    def __post_init__(self):
        if self.tolerance <= 0:
            raise ValidationError("tolerance must be positive")
        if self.max_iterations < 2:
            raise ValidationError("max_iterations must be at least 2")


@dataclass
class ExactSolution:
    e0: float
    ground_vector: StateVector
    iterations_used: int
    converged: bool
    residual: float


def _ritz_ground(alphas, betas):
    """Lowest eigenpair of the running tridiagonal matrix."""
    if len(alphas) == 1:
        return alphas[0], np.ones(1)
    w, v = scipy.linalg.eigh_tridiagonal(
        np.asarray(alphas), np.asarray(betas), select="i", select_range=(0, 0)
    )
    return float(w[0]), v[:, 0]


def lanczos_ground(spec: HamiltonianSpec, config: LanczosConfig | None = None) -> ExactSolution:
    """Ground state via Lanczos with full reorthogonalization.

    Matrix-vector products are matrix-free (hamiltonian.apply). The start
    vector is seeded random; on an invariant subspace the Krylov basis is
    extended with a fresh random direction so small degenerate problems still
    converge to the true minimum.
    """
    cfg = config or LanczosConfig()
    sector = spec.sector
    dim = sector.dimension
    if dim > _LANCZOS_DIM_CAP:
        raise DimensionOverflowError(f"dimension {dim} exceeds the Lanczos cap")
    rng = np.random.default_rng(cfg.seed)

    def matvec(x: np.ndarray) -> np.ndarray:
        return apply(spec, StateVector(sector, x)).amplitudes

    v = rng.standard_normal(dim).astype(np.complex128)
    v /= np.linalg.norm(v)
    basis = [v]
    alphas: list[float] = []
    betas: list[float] = []
    w = matvec(v)
    theta, y = 0.0, np.ones(1)
    for iteration in range(1, cfg.max_iterations + 1):
        alpha = float(np.vdot(basis[-1], w).real)
        alphas.append(alpha)
        w = w - alpha * basis[-1]
        if len(basis) > 1:
            w = w - betas[-1] * basis[-2]
        if cfg.full_reorthogonalization:
            for _ in range(2):
                for u in basis:
                    w = w - np.vdot(u, w) * u
        theta, y = _ritz_ground(alphas, betas)
        beta = float(np.linalg.norm(w))
        scale = max(1.0, abs(theta))
        bound = beta * abs(y[-1])
        if bound <= 0.1 * cfg.tolerance * scale or beta < 1e-13 or len(basis) == dim:
            x = _assemble(basis, y)
            residual = float(np.linalg.norm(matvec(x) - theta * x))
            if residual <= cfg.tolerance * scale:
                return ExactSolution(theta, StateVector(sector, x), iteration, True, residual)
            if len(basis) == dim:
                return ExactSolution(theta, StateVector(sector, x), iteration, False, residual)
            if beta < 1e-13:
                # invariant subspace: restart with a fresh orthogonal direction
                w = rng.standard_normal(dim).astype(np.complex128)
                for u in basis:
                    w = w - np.vdot(u, w) * u
                beta = float(np.linalg.norm(w))
                if beta < 1e-13:
                    return ExactSolution(theta, StateVector(sector, x), iteration, False, residual)
        betas.append(beta)
        v = w / beta
        basis.append(v)
        w = matvec(v)
    x = _assemble(basis[: len(y)], y)
    residual = float(np.linalg.norm(matvec(x) - theta * x))
    converged = residual <= cfg.tolerance * max(1.0, abs(theta))
    return ExactSolution(theta, StateVector(sector, x), cfg.max_iterations, converged, residual)


def _assemble(basis, y) -> np.ndarray:
    x = np.zeros_like(basis[0])
    for coeff, u in zip(y, basis):
        x += coeff * u
    return x / np.linalg.norm(x)


def full_spectrum(spec: HamiltonianSpec) -> np.ndarray:
    """All eigenvalues, ascending. Dense path, capped at dimension 4096."""
    return scipy.linalg.eigvalsh(to_dense(spec, DENSE_CAP))


def eigensystem(spec: HamiltonianSpec) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and orthonormal eigenvector columns."""
    w, u = scipy.linalg.eigh(to_dense(spec, DENSE_CAP))
    return w, u


def mean_and_variance(spec: HamiltonianSpec, v: StateVector) -> tuple[float, float]:
    """<H> and <H^2> - <H>^2 for an arbitrary (not necessarily normalized)
    state, computed from two matrix-free applications."""
    amps = v.amplitudes
    norm_sq = float(np.vdot(amps, amps).real)
    if norm_sq == 0.0:
        raise ZeroVectorError("state has zero norm")
    hv = apply(spec, v).amplitudes
    energy = float(np.vdot(amps, hv).real) / norm_sq
    h2 = float(np.vdot(hv, hv).real) / norm_sq
    variance = h2 - energy * energy
    if variance < 0.0:
        tol = 1e-10 * max(1.0, energy * energy)
        if variance < -tol:
            raise ValidationError(f"variance {variance} negative beyond round-off")
        variance = 0.0
    return energy, variance


def imaginary_time_family(
    spec: HamiltonianSpec, tau_list, seed: int = 0
) -> list[tuple[float, StateVector]]:
    """Normalized exp(-tau H) |psi_I> for a fixed seeded random real start.

    Uses the exact eigendecomposition (no step-size error), so the family is
    a controlled path from a random state (tau=0) to the ground state.
    """
    taus = [float(t) for t in tau_list]
    if any(t < 0 for t in taus):
        raise ValidationError("tau values must be >= 0")
    w, u = eigensystem(spec)
    rng = np.random.default_rng(seed)
    psi0 = rng.standard_normal(spec.sector.dimension)
    psi0 /= np.linalg.norm(psi0)
    coeffs = u.T @ psi0
    out = []
    for tau in taus:
        amps = u @ (np.exp(-tau * (w - w[0])) * coeffs)
        amps /= np.linalg.norm(amps)
        out.append((tau, StateVector(spec.sector, amps)))
    return out


def ground_degeneracy(spectrum: np.ndarray, tol: float = 1e-8) -> int:
    """Number of eigenvalues within tol of the minimum."""
    return int(np.sum(spectrum <= spectrum[0] + tol))


def spectral_gap(spectrum: np.ndarray, tol: float = 1e-8) -> float:
    """Gap between the ground subspace and the rest of the spectrum."""
    above = spectrum[spectrum > spectrum[0] + tol]
    if above.size == 0:
        raise ValidationError("spectrum has no states above the ground subspace")
    return float(above[0] - spectrum[0])
