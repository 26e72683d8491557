"""Pure-numpy implementations of the hot kernels.

Mirrors ``core_ext`` (the Cython build) exactly: same signatures, same update
rules, and the Metropolis sweeps consume pre-generated random arrays so both
backends walk identical trajectories. See ``benchmarks/bench_kernels.py`` for
a speed comparison.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np


def _log2cosh(z: np.ndarray) -> np.ndarray:
    # log(2 cosh z) with the real part folded positive so exp never overflows
    z = np.where(z.real < 0, -z, z)
    return z + np.log(1.0 + np.exp(-2.0 * z))


# ---------------------------------------------------------------------------
# matrix-free spin Hamiltonian application over the full 2^n basis
# ---------------------------------------------------------------------------

def spin_apply(out, vec, n_sites, zz_i, zz_j, zz_w, ex_i, ex_j, ex_w, x_w):
    """out = H vec for H = sum_b zz_w ZZ + sum_b ex_w (XX + YY) + sum_s x_w X.

    Bit q of a basis index is spin q, bit value 1 meaning up (s = +1).
    The XX+YY term connects anti-aligned pairs with amplitude 2*ex_w.
    """
    dim = vec.shape[0]
    idx = np.arange(dim, dtype=np.int64)
    out[:] = 0.0
    if zz_w.shape[0]:
        diag = np.zeros(dim)
        for i, j, w in zip(zz_i, zz_j, zz_w):
            anti = ((idx >> i) ^ (idx >> j)) & 1
            diag += w * (1.0 - 2.0 * anti)
        out += diag * vec
    for i, j, w in zip(ex_i, ex_j, ex_w):
        anti = (((idx >> int(i)) ^ (idx >> int(j))) & 1).astype(bool)
        mask = (1 << int(i)) | (1 << int(j))
        src = idx[anti]
        out[src] += (2.0 * w) * vec[src ^ mask]
    for i, w in enumerate(x_w):
        if w != 0.0:
            out += w * vec[idx ^ (1 << i)]


# ---------------------------------------------------------------------------
# batched statevector gates; states is (batch, 2**n_qubits), updated in place
# ---------------------------------------------------------------------------

def ry_batch(states, n_qubits, qubit, angles):
    """Apply R_y(angle) = [[cos, -sin], [sin, cos]] (half angles) on one qubit."""
    b, dim = states.shape
    inner = 1 << qubit
    view = states.reshape(b, dim >> (qubit + 1), 2, inner)
    c = np.cos(0.5 * angles)[:, None, None]
    s = np.sin(0.5 * angles)[:, None, None]
    a0 = view[:, :, 0, :].copy()
    a1 = view[:, :, 1, :]
    view[:, :, 0, :] = c * a0 - s * a1
    view[:, :, 1, :] = s * a0 + c * a1


def rxexp_batch(states, n_qubits, qubit, angles):
    """Apply exp(i*angle*X) = cos(angle) I + i sin(angle) X on one qubit."""
    b, dim = states.shape
    inner = 1 << qubit
    view = states.reshape(b, dim >> (qubit + 1), 2, inner)
    c = np.cos(angles)[:, None, None]
    s = 1.0j * np.sin(angles)[:, None, None]
    a0 = view[:, :, 0, :].copy()
    a1 = view[:, :, 1, :]
    view[:, :, 0, :] = c * a0 + s * a1
    view[:, :, 1, :] = s * a0 + c * a1


@lru_cache(maxsize=256)
def _cnot_pairs(n_qubits: int, control: int, target: int):
    idx = np.arange(1 << n_qubits, dtype=np.int64)
    lo = idx[(((idx >> control) & 1) == 1) & (((idx >> target) & 1) == 0)]
    return lo, lo ^ (1 << target)


def cnot_batch(states, n_qubits, control, target):
    lo, hi = _cnot_pairs(n_qubits, control, target)
    tmp = states[:, lo].copy()
    states[:, lo] = states[:, hi]
    states[:, hi] = tmp


# ---------------------------------------------------------------------------
# Metropolis sweeps; spins is (chains, n_sites) of +-1 floats, mutated in place
# together with the per-chain caches. Proposals and uniforms are pre-generated
# with shape (steps, chains).
# ---------------------------------------------------------------------------

def rbm_sweep_flip(spins, thetas, a, w, sites, urand):
    """Single-spin-flip sweep for log psi = a.s + sum_j log 2cosh(theta_j)."""
    n_acc = 0
    rows = np.arange(spins.shape[0])
    with np.errstate(over="ignore"):
        for t in range(sites.shape[0]):
            i = sites[t]
            s_cur = spins[rows, i]
            new_thetas = thetas - (2.0 * s_cur)[:, None] * w[:, i].T
            dlog = -2.0 * s_cur * a[i] + (_log2cosh(new_thetas) - _log2cosh(thetas)).sum(axis=1)
            acc = urand[t] < np.exp(2.0 * dlog.real)
            spins[rows[acc], i[acc]] = -s_cur[acc]
            thetas[acc] = new_thetas[acc]
            n_acc += int(acc.sum())
    return n_acc


def rbm_sweep_exchange(spins, thetas, a, w, prop_i, prop_j, urand):
    """Pair-swap sweep; proposals on aligned pairs are no-ops (rejected)."""
    n_acc = 0
    rows = np.arange(spins.shape[0])
    with np.errstate(over="ignore"):
        for t in range(prop_i.shape[0]):
            i, j = prop_i[t], prop_j[t]
            s_i = spins[rows, i]
            s_j = spins[rows, j]
            d_i = s_j - s_i
            new_thetas = thetas + d_i[:, None] * (w[:, i].T - w[:, j].T)
            dlog = d_i * (a[i] - a[j]) + (_log2cosh(new_thetas) - _log2cosh(thetas)).sum(axis=1)
            acc = (d_i != 0.0) & (urand[t] < np.exp(2.0 * dlog.real))
            spins[rows[acc], i[acc]] = s_j[acc]
            spins[rows[acc], j[acc]] = s_i[acc]
            thetas[acc] = new_thetas[acc]
            n_acc += int(acc.sum())
    return n_acc


def jastrow_sweep_flip(spins, fields, jmat, sites, urand):
    """Single-spin-flip sweep for log psi = sum_{i<j} J_ij s_i s_j.

    fields caches J @ s per chain and is kept in sync with spins.
    """
    n_acc = 0
    rows = np.arange(spins.shape[0])
    with np.errstate(over="ignore"):
        for t in range(sites.shape[0]):
            i = sites[t]
            s_cur = spins[rows, i]
            dlog = -2.0 * s_cur * fields[rows, i]
            acc = urand[t] < np.exp(2.0 * dlog)
            r = rows[acc]
            fields[r] += (-2.0 * s_cur[acc])[:, None] * jmat[i[acc]]
            spins[r, i[acc]] = -s_cur[acc]
            n_acc += int(acc.sum())
    return n_acc


def jastrow_sweep_exchange(spins, fields, jmat, prop_i, prop_j, urand):
    n_acc = 0
    rows = np.arange(spins.shape[0])
    with np.errstate(over="ignore"):
        for t in range(prop_i.shape[0]):
            i, j = prop_i[t], prop_j[t]
            s_i = spins[rows, i]
            s_j = spins[rows, j]
            d_i = s_j - s_i
            dlog = d_i * (fields[rows, i] - fields[rows, j]) - d_i * d_i * jmat[i, j]
            acc = (d_i != 0.0) & (urand[t] < np.exp(2.0 * dlog))
            r = rows[acc]
            fields[r] += d_i[acc, None] * (jmat[i[acc]] - jmat[j[acc]])
            spins[r, i[acc]] = s_j[acc]
            spins[r, j[acc]] = s_i[acc]
            n_acc += int(acc.sum())
    return n_acc
