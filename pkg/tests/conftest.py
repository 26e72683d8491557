"""Shared fixtures and independent dense oracles.

The oracle builders here assemble Hamiltonian matrices directly from operator
algebra (Kronecker products of single-site matrices, Jordan-Wigner strings
for fermions) and never touch the package's row/apply code, so they can
arbitrate it.

Encoding convention shared with the package: bit k of a basis integer is
site/mode k, and the composite basis index is sum_k bit_k 2^k. In the
single-site factor, index 0 is spin-down / empty and index 1 is spin-up /
occupied, so sigma_z = diag(-1, +1) here.
"""
from __future__ import annotations

import numpy as np
import pytest

from vbench import HamiltonianSpec, build_lattice

SZ = np.array([[-1.0, 0.0], [0.0, 1.0]])
SX = np.array([[0.0, 1.0], [1.0, 0.0]])
SY = np.array([[0.0, 1.0j], [-1.0j, 0.0]])
ANNIHILATE = np.array([[0.0, 1.0], [0.0, 0.0]])
PARITY = np.array([[1.0, 0.0], [0.0, -1.0]])  # (-1)^n, the JW string factor
EYE2 = np.eye(2)


def kron_site_ops(ops: dict[int, np.ndarray], n_modes: int) -> np.ndarray:
    """Tensor product with mode k at bit k (mode n-1 is the most significant)."""
    out = np.array([[1.0 + 0.0j]])
    for mode in range(n_modes - 1, -1, -1):
        out = np.kron(out, ops.get(mode, EYE2))
    return out


def jw_annihilators(n_modes: int) -> list[np.ndarray]:
    """Dense c_m with the Jordan-Wigner string over modes below m."""
    ops = []
    for m in range(n_modes):
        factors = {k: PARITY for k in range(m)}
        factors[m] = ANNIHILATE
        ops.append(kron_site_ops(factors, n_modes))
    return ops


def dense_oracle(spec: HamiltonianSpec) -> np.ndarray:
    """Dense sector Hamiltonian assembled independently of the package."""
    ns = spec.lattice.n_sites
    if spec.is_spin:
        dim = 1 << ns
        h = np.zeros((dim, dim), dtype=np.complex128)
        if spec.model == "tfim":
            j, gamma = spec.coupling("J"), spec.coupling("Gamma")
            for b in spec.lattice.nn_bonds:
                h += j * kron_site_ops({b.i: SZ, b.j: SZ}, ns)
            for i in range(ns):
                h += gamma * kron_site_ops({i: SX}, ns)
        else:
            if spec.model == "heisenberg":
                weighted = [(b, spec.coupling("J")) for b in spec.lattice.nn_bonds]
            else:
                weighted = [(b, spec.coupling("J1")) for b in spec.lattice.nn_bonds]
                weighted += [(b, spec.coupling("J2")) for b in spec.lattice.nnn_bonds]
            for b, w in weighted:
                for pauli in (SX, SY, SZ):
                    h += w * kron_site_ops({b.i: pauli, b.j: pauli}, ns)
        assert np.abs(h.imag).max() < 1e-12
        return h.real

    t = spec.coupling("t")
    if spec.model == "tv":
        n_modes = ns
        c = jw_annihilators(n_modes)
        h = np.zeros((1 << n_modes, 1 << n_modes), dtype=np.complex128)
        v = spec.coupling("V")
        for b in spec.lattice.nn_bonds:
            hop = c[b.i].conj().T @ c[b.j]
            h += -t * b.sign * (hop + hop.conj().T)
            h += v * (c[b.i].conj().T @ c[b.i]) @ (c[b.j].conj().T @ c[b.j])
    else:
        n_modes = 2 * ns  # up sites are modes 0..ns-1, down sites ns..2ns-1
        c = jw_annihilators(n_modes)
        h = np.zeros((1 << n_modes, 1 << n_modes), dtype=np.complex128)
        u = spec.coupling("U")
        for b in spec.lattice.nn_bonds:
            for off in (0, ns):
                hop = c[b.i + off].conj().T @ c[b.j + off]
                h += -t * b.sign * (hop + hop.conj().T)
        for i in range(ns):
            n_up = c[i].conj().T @ c[i]
            n_dn = c[i + ns].conj().T @ c[i + ns]
            h += u * n_up @ n_dn
    states = spec.sector.states()
    assert np.abs(h.imag).max() < 1e-12
    return h.real[np.ix_(states, states)]


# ---------------------------------------------------------------------------
# shared spec collections
# ---------------------------------------------------------------------------

def small_specs() -> list[HamiltonianSpec]:
    """One spec per model family, all with sector dimension <= 4096."""
    return [
        HamiltonianSpec.tfim(build_lattice("chain", [8], "P"), gamma=1.0),
        HamiltonianSpec.tfim(build_lattice("square", [3, 3], "O"), gamma=0.7),
        HamiltonianSpec.heisenberg(build_lattice("chain", [8], "P")),
        HamiltonianSpec.j1j2(build_lattice("square", [4, 2], "O"), j2=0.5),
        HamiltonianSpec.tv(build_lattice("chain", [8], "P"), n_fermions=4, v=1.0),
        HamiltonianSpec.tv(build_lattice("chain", [6], "A"), n_fermions=3, v=2.0),
        HamiltonianSpec.hubbard(build_lattice("chain", [4], "O"), n_up=2, n_down=2, u=4.0),
        HamiltonianSpec.hubbard(build_lattice("chain", [3], "P"), n_up=1, n_down=2, u=8.0),
    ]


@pytest.fixture(scope="session")
def oracle_cache():
    cache: dict[str, np.ndarray] = {}

    def get(spec: HamiltonianSpec) -> np.ndarray:
        key = spec.descriptor
        if key not in cache:
            cache[key] = dense_oracle(spec)
        return cache[key]

    return get
