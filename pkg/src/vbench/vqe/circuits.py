"""Noiseless statevector circuits for spin-model energy minimization.

Two ansatz families over L qubits (qubit q is site q, bit q of the basis
index):
  * rcx: d alternating blocks of per-qubit y-rotations and a CNOT ladder
    (qubit i controls i+1), a final rotation layer, applied to |0...0>;
    L*(d+1) angles.
  * hv: from the uniform superposition, d blocks of exp(i t1 sum_bonds Z Z)
    then exp(i t2 sum_q X_q); 2*d angles. The generators are the two
    non-commuting term groups of the transverse-field Ising Hamiltonian
    (couplings absorbed into the angles).

All gate applications are batched over parameter sets, which is what makes
shift-rule gradients cheap.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .. import _kernels
from ..errors import ParameterLengthMismatchError, SectorMismatchError, ValidationError
from ..exact import mean_and_variance
from ..hamiltonian import HamiltonianSpec, StateVector


@dataclass
class QuantumState:
    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        self.amplitudes = np.ascontiguousarray(self.amplitudes, dtype=np.complex128)
        if self.amplitudes.shape != (1 << self.n_qubits,):
            raise ValidationError("amplitude length must be 2**n_qubits")

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def _as_bond_pairs(bonds) -> tuple[tuple[int, int], ...]:
    pairs = []
    for b in bonds:
        pair = (b.i, b.j) if hasattr(b, "i") else (int(b[0]), int(b[1]))
        pairs.append(pair)
    return tuple(pairs)


@lru_cache(maxsize=64)
def _bond_parity(n_qubits: int, pairs: tuple[tuple[int, int], ...]) -> np.ndarray:
    """sum_bonds s_i s_j per basis state (integer-valued diagonal of sum ZZ)."""
    idx = np.arange(1 << n_qubits, dtype=np.int64)
    parity = np.zeros(idx.shape[0], dtype=np.int64)
    for i, j in pairs:
        anti = ((idx >> i) ^ (idx >> j)) & 1
        parity += 1 - 2 * anti
    return parity


@lru_cache(maxsize=64)
def _flip_perm(n_qubits: int, qubit: int) -> np.ndarray:
    return np.arange(1 << n_qubits, dtype=np.int64) ^ (1 << qubit)


@lru_cache(maxsize=64)
def _bit_sign(n_qubits: int, qubit: int) -> np.ndarray:
    """+1 where the qubit's bit is 0, -1 where it is 1."""
    bits = (np.arange(1 << n_qubits, dtype=np.int64) >> qubit) & 1
    return (1.0 - 2.0 * bits).astype(np.float64)


def zz_phase_batch(states: np.ndarray, n_qubits: int, pairs, angles: np.ndarray) -> None:
    """states *= exp(i * angle * sum_bonds Z_i Z_j), batched over rows."""
    parity = _bond_parity(n_qubits, _as_bond_pairs(pairs))
    unique, inverse = np.unique(parity, return_inverse=True)
    table = np.exp(1j * np.outer(angles, unique.astype(np.float64)))
    states *= table[:, inverse]


def rcx_states(n_qubits: int, depth: int, thetas: np.ndarray) -> np.ndarray:
    """Batched rcx circuit states; thetas is (batch, L*(depth+1)), layer-major."""
    thetas = np.atleast_2d(np.ascontiguousarray(thetas, dtype=np.float64))
    n_params = n_qubits * (depth + 1)
    if thetas.shape[1] != n_params:
        raise ParameterLengthMismatchError(
            f"rcx depth {depth} on {n_qubits} qubits needs {n_params} angles"
        )
    states = np.zeros((thetas.shape[0], 1 << n_qubits), dtype=np.complex128)
    states[:, 0] = 1.0
    for layer in range(depth + 1):
        for q in range(n_qubits):
            _kernels.ry_batch(states, n_qubits, q, np.ascontiguousarray(thetas[:, layer * n_qubits + q]))
        if layer < depth:
            for q in range(n_qubits - 1):
                _kernels.cnot_batch(states, n_qubits, q, q + 1)
    return states


def hv_states(n_qubits: int, depth: int, thetas: np.ndarray, bonds) -> np.ndarray:
    """Batched hv circuit states; thetas is (batch, 2*depth): (zz, x) per block."""
    thetas = np.atleast_2d(np.ascontiguousarray(thetas, dtype=np.float64))
    if thetas.shape[1] != 2 * depth:
        raise ParameterLengthMismatchError(
            f"hv depth {depth} needs {2 * depth} angles"
        )
    dim = 1 << n_qubits
    states = np.full((thetas.shape[0], dim), 1.0 / np.sqrt(dim), dtype=np.complex128)
    for block in range(depth):
        zz_phase_batch(states, n_qubits, bonds, thetas[:, 2 * block])
        x_angles = np.ascontiguousarray(thetas[:, 2 * block + 1])
        for q in range(n_qubits):
            _kernels.rxexp_batch(states, n_qubits, q, x_angles)
    return states


def prepare_rcx(n_qubits: int, depth: int, theta) -> QuantumState:
    """Rotation/CNOT-ladder ansatz state for one parameter vector."""
    states = rcx_states(n_qubits, depth, np.asarray(theta, dtype=np.float64)[None, :])
    return QuantumState(n_qubits, states[0])


def prepare_hv(n_qubits: int, depth: int, theta, bonds) -> QuantumState:
    """Alternating-evolution ansatz state for one parameter vector."""
    states = hv_states(n_qubits, depth, np.asarray(theta, dtype=np.float64)[None, :], bonds)
    return QuantumState(n_qubits, states[0])


def circuit_energy_and_variance(state: QuantumState, spec: HamiltonianSpec) -> tuple[float, float]:
    """Exact <H> and Var H of a circuit state (no shot noise), through the
    same matrix-free applies as every other exact moment in the package."""
    if not spec.is_spin or spec.lattice.n_sites != state.n_qubits:
        raise SectorMismatchError(
            "circuit states pair with spin models on matching qubit counts"
        )
    return mean_and_variance(spec, StateVector(spec.sector, state.amplitudes))


def tfim_energies(states: np.ndarray, spec: HamiltonianSpec) -> np.ndarray:
    """<H> per row for a batch of normalized states (optimization fast path).

    Agrees with circuit_energy_and_variance to round-off; kept separate so
    gradient evaluations avoid per-row python overhead.
    """
    if spec.model != "tfim":
        raise ValidationError("batched energies implemented for the tfim model")
    n_qubits = spec.lattice.n_sites
    j, gamma = spec.coupling("J"), spec.coupling("Gamma")
    parity = _bond_parity(n_qubits, _as_bond_pairs(spec.lattice.nn_bonds))
    hpsi = (j * parity.astype(np.float64)) * states
    if gamma != 0.0:
        for q in range(n_qubits):
            hpsi += gamma * states[:, _flip_perm(n_qubits, q)]
    return np.einsum("bd,bd->b", states.conj(), hpsi).real


# ---------------------------------------------------------------------------
# adjoint (reverse-sweep) gradients: identical values to the shift rule /
# finite differences, at a handful of circuit passes instead of two per
# parameter. The optimizer uses these; tests pin the equivalence.
# ---------------------------------------------------------------------------

def _apply_tfim(states: np.ndarray, spec: HamiltonianSpec) -> np.ndarray:
    n_qubits = spec.lattice.n_sites
    j, gamma = spec.coupling("J"), spec.coupling("Gamma")
    parity = _bond_parity(n_qubits, _as_bond_pairs(spec.lattice.nn_bonds))
    out = (j * parity.astype(np.float64)) * states
    if gamma != 0.0:
        for q in range(n_qubits):
            out += gamma * states[:, _flip_perm(n_qubits, q)]
    return out


def rcx_adjoint_gradient(spec: HamiltonianSpec, depth: int, theta: np.ndarray) -> np.ndarray:
    """dE/dtheta for the rcx ansatz by one forward and one reverse sweep."""
    n_qubits = spec.lattice.n_sites
    theta = np.asarray(theta, dtype=np.float64)
    psi = rcx_states(n_qubits, depth, theta[None, :])
    lam = _apply_tfim(psi, spec)
    grad = np.empty_like(theta)
    for layer in range(depth, -1, -1):
        if layer < depth:
            for q in range(n_qubits - 2, -1, -1):  # CNOT is self-inverse
                _kernels.cnot_batch(psi, n_qubits, q, q + 1)
                _kernels.cnot_batch(lam, n_qubits, q, q + 1)
        for q in range(n_qubits - 1, -1, -1):
            k = layer * n_qubits + q
            # d R_y(t)/dt = (-i Y/2) R_y(t); Y|psi> built from the flipped
            # amplitudes with the sign of the target bit
            y_psi = -1j * _bit_sign(n_qubits, q) * psi[0, _flip_perm(n_qubits, q)]
            grad[k] = 2.0 * np.real(np.vdot(lam[0], -0.5j * y_psi))
            angle = np.array([-theta[k]])
            _kernels.ry_batch(psi, n_qubits, q, angle)
            _kernels.ry_batch(lam, n_qubits, q, angle)
    return grad


def hv_adjoint_gradient(
    spec: HamiltonianSpec, depth: int, theta: np.ndarray, bonds
) -> np.ndarray:
    """dE/dtheta for the hv ansatz by one forward and one reverse sweep."""
    n_qubits = spec.lattice.n_sites
    theta = np.asarray(theta, dtype=np.float64)
    psi = hv_states(n_qubits, depth, theta[None, :], bonds)
    lam = _apply_tfim(psi, spec)
    parity = _bond_parity(n_qubits, _as_bond_pairs(bonds)).astype(np.float64)
    grad = np.empty_like(theta)
    for block in range(depth - 1, -1, -1):
        # d exp(i t A)/dt = i A exp(i t A): undo the gate, then overlap
        x_psi = np.zeros_like(psi[0])
        for q in range(n_qubits):
            x_psi += psi[0, _flip_perm(n_qubits, q)]
        grad[2 * block + 1] = 2.0 * np.real(np.vdot(lam[0], 1j * x_psi))
        x_angle = np.array([-theta[2 * block + 1]])
        for q in range(n_qubits):
            _kernels.rxexp_batch(psi, n_qubits, q, x_angle)
            _kernels.rxexp_batch(lam, n_qubits, q, x_angle)
        grad[2 * block] = 2.0 * np.real(np.vdot(lam[0], 1j * parity * psi[0]))
        zz_phase_batch(psi, n_qubits, bonds, np.array([-theta[2 * block]]))
        zz_phase_batch(lam, n_qubits, bonds, np.array([-theta[2 * block]]))
    return grad
