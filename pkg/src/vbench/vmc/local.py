"""Local energies: E_loc(x) = sum_x' <x|H|x'> psi(x') / psi(x).

The single-configuration form goes through hamiltonian.row; the batched form
builds all connected configurations per model and evaluates the ansatz once
on the concatenated batch, which is what the optimization loop uses.
"""
from __future__ import annotations

import numpy as np

from ..errors import NodeEvaluationError, ValidationError
from ..hamiltonian import HamiltonianSpec, row
from .ansatz import bits_to_spins, spins_to_bits

_LOG_FLOOR = -300.0  # below this the amplitude has underflowed


def local_energy(spec: HamiltonianSpec, ansatz, x: int) -> complex:
    """Local energy of one basis state (spin models)."""
    if not spec.is_spin:
        raise ValidationError("local energies cover spin models only")
    n = spec.lattice.n_sites
    spins = bits_to_spins(x, n)
    log_ref = complex(ansatz.log_amplitude(spins))
    if not np.isfinite(log_ref.real) or log_ref.real < _LOG_FLOOR:
        raise NodeEvaluationError(f"amplitude underflow at configuration {x:#x}")
    total = 0.0 + 0.0j
    for target, amp in row(spec, x):
        if target == x:
            total += amp
            continue
        ratio = np.exp(complex(ansatz.log_amplitude(bits_to_spins(target, n))) - log_ref)
        total += amp * ratio
    return total


def _spin_weighted_bonds(spec: HamiltonianSpec) -> list[tuple[int, int, float]]:
    if spec.model == "tfim":
        j = spec.coupling("J")
        return [(b.i, b.j, j) for b in spec.lattice.nn_bonds]
    if spec.model == "heisenberg":
        j = spec.coupling("J")
        return [(b.i, b.j, j) for b in spec.lattice.nn_bonds]
    j1, j2 = spec.coupling("J1"), spec.coupling("J2")
    return [(b.i, b.j, j1) for b in spec.lattice.nn_bonds] + [
        (b.i, b.j, j2) for b in spec.lattice.nnn_bonds
    ]


def local_energies(spec: HamiltonianSpec, ansatz, samples: np.ndarray) -> np.ndarray:
    """Batched local energies for (batch, n_sites) configurations of +-1."""
    if not spec.is_spin:
        raise ValidationError("local energies cover spin models only")
    samples = np.asarray(samples, dtype=np.float64)
    n_batch, n = samples.shape
    bonds = _spin_weighted_bonds(spec)
    diag = np.zeros(n_batch)
    for i, j, w in bonds:
        diag += w * samples[:, i] * samples[:, j]
    log_ref = ansatz.log_amplitude(samples)
    if not np.all(np.isfinite(log_ref.real) & (np.real(log_ref) > _LOG_FLOOR)):
        raise NodeEvaluationError("amplitude underflow inside the sample batch")
    eloc = diag.astype(np.complex128)

    connected = []  # (row indices, weight, configurations)
    if spec.model == "tfim":
        gamma = spec.coupling("Gamma")
        if gamma != 0.0:
            flipped = np.repeat(samples[:, None, :], n, axis=1)
            sites = np.arange(n)
            flipped[:, sites, sites] *= -1.0
            rows_idx = np.repeat(np.arange(n_batch), n)
            connected.append((rows_idx, np.full(rows_idx.shape[0], gamma), flipped.reshape(-1, n)))
    else:
        for i, j, w in bonds:
            if w == 0.0:
                continue
            anti = samples[:, i] != samples[:, j]
            if not anti.any():
                continue
            swapped = samples[anti].copy()
            swapped[:, [i, j]] = swapped[:, [j, i]]
            rows_idx = np.nonzero(anti)[0]
            connected.append((rows_idx, np.full(rows_idx.shape[0], 2.0 * w), swapped))
    if connected:
        rows_all = np.concatenate([c[0] for c in connected])
        weights = np.concatenate([c[1] for c in connected])
        configs = np.concatenate([c[2] for c in connected], axis=0)
        with np.errstate(over="ignore"):
            ratios = np.exp(ansatz.log_amplitude(configs) - log_ref[rows_all])
        np.add.at(eloc, rows_all, weights * ratios)
    return eloc


def dense_state_vector(ansatz, n_sites: int) -> np.ndarray:
    """Amplitudes of the ansatz over the full spin basis (small systems)."""
    dim = 1 << n_sites
    bits = ((np.arange(dim)[:, None] >> np.arange(n_sites)[None, :]) & 1) * 2.0 - 1.0
    log_amps = ansatz.log_amplitude(bits)
    shift = np.max(log_amps.real)  # normalization-safe
    return np.exp(log_amps - shift)


__all__ = [
    "dense_state_vector",
    "local_energies",
    "local_energy",
    "spins_to_bits",
]
