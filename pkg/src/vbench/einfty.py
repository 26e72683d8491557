"""Zero-point energy: the trace-average of H over the sector.

Closed forms exist for all in-scope models; the sampled estimator draws
sector basis states uniformly (combinadic unranking of a uniform index, no
rejection) and averages the diagonal matrix element, which is exact because
every off-diagonal term has zero expectation on a basis state.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import UnsupportedModelError, ValidationError
from .hamiltonian import HamiltonianSpec, diagonal_batch, unrank_combination


@dataclass(frozen=True)
class EInftyEstimate:
    value: float
    std_error: float
    method: str  # "analytic" | "sampled"
    n_samples: int


def einfty_analytic(spec: HamiltonianSpec) -> EInftyEstimate:
    """Closed-form trace average.

    Spin models are sums of Pauli strings, hence traceless. For the fermion
    models only the diagonal interaction contributes; no symmetry beyond the
    fixed particle numbers is used.
    """
    if spec.is_spin:
        value = 0.0
    elif spec.model == "tv":
        ns = spec.lattice.n_sites
        nf = spec.n_fermions
        n_bonds = len(spec.lattice.nn_bonds)
        value = spec.coupling("V") * n_bonds * nf * (nf - 1) / (ns * (ns - 1))
    elif spec.model == "hubbard":
        value = spec.coupling("U") * spec.n_up * spec.n_down / spec.lattice.n_sites
    else:
        raise UnsupportedModelError(f"no zero point for model {spec.model!r}")
    return EInftyEstimate(value=float(value), std_error=0.0, method="analytic", n_samples=0)


def _uniform_sector_states(spec: HamiltonianSpec, n_samples: int, rng) -> np.ndarray:
    ns = spec.lattice.n_sites
    if spec.is_spin:
        return rng.integers(0, 1 << ns, size=n_samples, dtype=np.int64)
    if spec.model == "tv":
        dim = math.comb(ns, spec.n_fermions)
        ranks = rng.integers(0, dim, size=n_samples, dtype=np.int64)
        return unrank_combination(ranks, ns, spec.n_fermions)
    ranks_up = rng.integers(0, math.comb(ns, spec.n_up), size=n_samples, dtype=np.int64)
    ranks_dn = rng.integers(0, math.comb(ns, spec.n_down), size=n_samples, dtype=np.int64)
    up = unrank_combination(ranks_up, ns, spec.n_up)
    dn = unrank_combination(ranks_dn, ns, spec.n_down)
    return up | (dn << ns)


def einfty_sampled(spec: HamiltonianSpec, n_samples: int, seed: int = 0) -> EInftyEstimate:
    """Monte Carlo trace average over uniformly drawn sector basis states."""
    if n_samples < 2:
        raise ValidationError("n_samples must be at least 2")
    rng = np.random.default_rng(seed)
    states = _uniform_sector_states(spec, int(n_samples), rng)
    values = diagonal_batch(spec, states)
    return EInftyEstimate(
        value=float(values.mean()),
        std_error=float(values.std(ddof=1) / math.sqrt(n_samples)),
        method="sampled",
        n_samples=int(n_samples),
    )


def einfty_enumerated(spec: HamiltonianSpec) -> float:
    """Trace average by full sector enumeration (small sectors only)."""
    states = spec.sector.states()
    return float(diagonal_batch(spec, states).mean())
