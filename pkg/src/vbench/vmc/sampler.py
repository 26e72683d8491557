"""Metropolis sampling of |psi(x)|^2 over spin configurations.

Chains run with independently derived per-chain random streams; all proposal
sites/bonds and acceptance uniforms are pre-generated so the compiled and
pure-python sweep kernels walk identical trajectories. Moves: single spin
flips (TFIM) or bond swaps of anti-aligned pairs, which conserve total
magnetization (Heisenberg-type models in a fixed-S_z sector).
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .. import _kernels
from ..errors import IncompatibleMoveError, ValidationError
from ..hamiltonian import HamiltonianSpec
from .ansatz import JastrowAnsatz, RbmAnsatz

MOVES = ("single_flip", "exchange")


@dataclass(frozen=True)
class SamplerConfig:
    n_chains: int = 16
    n_samples: int = 128  # recorded per chain, one per sweep
    n_burnin: int = 64  # discarded sweeps
    move: str = "single_flip"
    seed: int | tuple = 0
    steps_per_sweep: int | None = None  # default: one proposal per site

    def __post_init__(self):
        if self.move not in MOVES:
            raise ValidationError(f"unknown move kind {self.move!r}")
        if self.n_chains < 2:
            raise ValidationError("need at least 2 chains for error estimates")
        if self.n_samples < 1 or self.n_burnin < 0:
            raise ValidationError("bad sample/burn-in counts")


@dataclass
class SampleSet:
    samples: np.ndarray  # (chains, sweeps, sites) of +-1
    acceptance_rate: float
    final_configs: np.ndarray  # (chains, sites), for chain continuation

    @property
    def flat(self) -> np.ndarray:
        c, s, n = self.samples.shape
        return self.samples.reshape(c * s, n)


def required_move(spec: HamiltonianSpec) -> str:
    return "single_flip" if spec.model == "tfim" else "exchange"


def _check_move(spec: HamiltonianSpec, move: str) -> None:
    if not spec.is_spin:
        raise ValidationError("Monte Carlo sampling covers spin models only")
    if move != required_move(spec):
        raise IncompatibleMoveError(
            f"{spec.model} requires {required_move(spec)!r} moves, got {move!r}"
        )


def _initial_configs(spec: HamiltonianSpec, cfg: SamplerConfig, rng) -> np.ndarray:
    n = spec.lattice.n_sites
    if cfg.move == "single_flip":
        return rng.choice([-1.0, 1.0], size=(cfg.n_chains, n))
    base = np.full(n, -1.0)
    base[: n // 2] = 1.0  # fixed magnetization sector, shuffled per chain
    return np.stack([rng.permutation(base) for _ in range(cfg.n_chains)])


def _proposal_arrays(spec, cfg, rngs, n_steps):
    n = spec.lattice.n_sites
    c = cfg.n_chains
    urand = np.empty((n_steps, c))
    if cfg.move == "single_flip":
        prop_i = np.empty((n_steps, c), dtype=np.int64)
        for k, rng in enumerate(rngs):
            prop_i[:, k] = rng.integers(0, n, n_steps)
            urand[:, k] = rng.random(n_steps)
        return prop_i, None, urand
    bonds = spec.lattice.nn_bonds
    bi = np.array([b.i for b in bonds], dtype=np.int64)
    bj = np.array([b.j for b in bonds], dtype=np.int64)
    choice = np.empty((n_steps, c), dtype=np.int64)
    for k, rng in enumerate(rngs):
        choice[:, k] = rng.integers(0, len(bonds), n_steps)
        urand[:, k] = rng.random(n_steps)
    return np.ascontiguousarray(bi[choice]), np.ascontiguousarray(bj[choice]), urand


def _generic_sweep(ansatz, spins, prop_i, prop_j, urand) -> int:
    """Fallback sweep through the ansatz's public log-amplitude interface."""
    n_acc = 0
    rows = np.arange(spins.shape[0])
    log_cur = ansatz.log_amplitude(spins)
    with np.errstate(over="ignore"):
        for t in range(prop_i.shape[0]):
            proposal = spins.copy()
            if prop_j is None:
                i = prop_i[t]
                proposal[rows, i] = -proposal[rows, i]
                movable = np.ones(spins.shape[0], dtype=bool)
            else:
                i, j = prop_i[t], prop_j[t]
                s_i, s_j = spins[rows, i], spins[rows, j]
                proposal[rows, i] = s_j
                proposal[rows, j] = s_i
                movable = s_i != s_j
            log_new = ansatz.log_amplitude(proposal)
            ratio_sq = np.exp(2.0 * (log_new - log_cur).real)
            acc = movable & (urand[t] < ratio_sq)
            spins[acc] = proposal[acc]
            log_cur[acc] = log_new[acc]
            n_acc += int(acc.sum())
    return n_acc


def _run_sweeps(ansatz, spec, cfg, spins, rngs, n_sweeps, record) -> tuple[int, list]:
    steps = cfg.steps_per_sweep or spec.lattice.n_sites
    recorded = []
    n_acc = 0
    if isinstance(ansatz, RbmAnsatz):
        cache = np.ascontiguousarray(ansatz.hidden_activations(spins))
        kernel = (
            _kernels.rbm_sweep_flip if cfg.move == "single_flip" else _kernels.rbm_sweep_exchange
        )
        args = (np.ascontiguousarray(ansatz.a), np.ascontiguousarray(ansatz.w))
    elif isinstance(ansatz, JastrowAnsatz):
        cache = np.ascontiguousarray(spins @ ansatz.j_matrix)
        kernel = (
            _kernels.jastrow_sweep_flip
            if cfg.move == "single_flip"
            else _kernels.jastrow_sweep_exchange
        )
        args = (np.ascontiguousarray(ansatz.j_matrix),)
    else:
        cache = kernel = args = None
    for _ in range(n_sweeps):
        prop_i, prop_j, urand = _proposal_arrays(spec, cfg, rngs, steps)
        if kernel is None:
            n_acc += _generic_sweep(ansatz, spins, prop_i, prop_j, urand)
        elif cfg.move == "single_flip":
            n_acc += kernel(spins, cache, *args, prop_i, urand)
        else:
            n_acc += kernel(spins, cache, *args, prop_i, prop_j, urand)
        if record:
            recorded.append(spins.copy())
    return n_acc, recorded


def metropolis_sample(
    ansatz,
    spec: HamiltonianSpec,
    cfg: SamplerConfig,
    initial: np.ndarray | None = None,
) -> SampleSet:
    """Draw |psi|^2-distributed configurations with Metropolis acceptance
    min(1, |psi(x')/psi(x)|^2). One sample is recorded per sweep."""
    _check_move(spec, cfg.move)
    master = np.random.SeedSequence(cfg.seed)
    rngs = [np.random.default_rng(s) for s in master.spawn(cfg.n_chains + 1)]
    init_rng = rngs.pop()
    if initial is None:
        spins = _initial_configs(spec, cfg, init_rng)
    else:
        spins = np.array(initial, dtype=np.float64)
        if spins.shape != (cfg.n_chains, spec.lattice.n_sites):
            raise ValidationError("initial configuration shape mismatch")
    spins = np.ascontiguousarray(spins)
    acc_burn, _ = _run_sweeps(ansatz, spec, cfg, spins, rngs, cfg.n_burnin, record=False)
    acc, recorded = _run_sweeps(ansatz, spec, cfg, spins, rngs, cfg.n_samples, record=True)
    steps = cfg.steps_per_sweep or spec.lattice.n_sites
    total = (cfg.n_burnin + cfg.n_samples) * steps * cfg.n_chains
    samples = np.stack(recorded, axis=1)  # (chains, sweeps, sites)
    return SampleSet(
        samples=samples,
        acceptance_rate=(acc_burn + acc) / total,
        final_configs=spins.copy(),
    )


def continue_config(cfg: SamplerConfig, iteration: int) -> SamplerConfig:
    """Config for a follow-up run of already-thermalized chains."""
    return replace(
        cfg,
        n_burnin=max(2, cfg.n_burnin // 8),
        seed=(cfg.seed, iteration) if isinstance(cfg.seed, int) else (*cfg.seed, iteration),
    )
