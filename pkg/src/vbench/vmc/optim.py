"""Energy estimation, gradient and update rules, and the optimization loop.

The gradient estimator is the centered covariance of local energies with the
log-derivatives; it vanishes identically on eigenstates. Plain gradient
steps (sgd) or geometry-preconditioned steps (sr, via the sampled covariance
of the log-derivatives) update the parameters.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..einfty import einfty_analytic
from ..errors import ValidationError
from ..hamiltonian import HamiltonianSpec
from ..results import VariationalResult
from ..scores import v_score
from .local import local_energies
from .sampler import SampleSet, SamplerConfig, continue_config, metropolis_sample

OPTIMIZERS = ("sgd", "sr")


@dataclass
class EnergyEstimate:
    energy: float
    variance: float
    std_error: float
    acceptance_rate: float


def _moments(eloc: np.ndarray, n_chains: int) -> tuple[float, float, float]:
    energy = float(eloc.mean().real)
    centered = eloc - eloc.mean()
    n = eloc.shape[0]
    variance = float((np.abs(centered) ** 2).sum() / max(n - 1, 1))
    chain_means = eloc.reshape(n_chains, -1).mean(axis=1).real
    std_error = float(chain_means.std(ddof=1) / np.sqrt(n_chains))
    return energy, variance, std_error


def estimate_energy(
    ansatz, spec: HamiltonianSpec, cfg: SamplerConfig, initial=None
) -> tuple[EnergyEstimate, SampleSet]:
    """Sample the ansatz and estimate E, Var E, and the error of the mean.

    Var E is the sample variance of the local energies (it estimates
    <H^2> - <H>^2); the error of the mean is taken across chains, which are
    independent by construction.
    """
    samples = metropolis_sample(ansatz, spec, cfg, initial=initial)
    eloc = local_energies(spec, ansatz, samples.flat)
    energy, variance, std_error = _moments(eloc, cfg.n_chains)
    return EnergyEstimate(energy, variance, std_error, samples.acceptance_rate), samples


def gradient_from_samples(
    o_mat: np.ndarray, eloc: np.ndarray, weights: np.ndarray | None = None
) -> np.ndarray:
    """f_k = E[(E_loc - <E_loc>) conj(O_k)] over the sample batch."""
    if weights is None:
        e_mean = eloc.mean()
        o_mean = o_mat.mean(axis=0)
        return np.conj(o_mat - o_mean).T @ (eloc - e_mean) / eloc.shape[0]
    weights = np.asarray(weights, dtype=np.float64)
    weights = weights / weights.sum()
    e_mean = weights @ eloc
    o_mean = weights @ o_mat
    return np.conj(o_mat - o_mean).T @ (weights * (eloc - e_mean))


def sr_delta(
    o_mat: np.ndarray,
    eloc: np.ndarray,
    diag_shift: float,
    weights: np.ndarray | None = None,
) -> tuple[np.ndarray, bool]:
    """Solve (S + shift I) delta = f with S the centered covariance of the
    log-derivatives. Returns (delta, True) or falls back to (f, False)."""
    if diag_shift <= 0:
        raise ValidationError("diag_shift must be positive")
    f = gradient_from_samples(o_mat, eloc, weights)
    if weights is None:
        o_c = o_mat - o_mat.mean(axis=0)
        s_mat = np.conj(o_c).T @ o_c / o_mat.shape[0]
    else:
        w = np.asarray(weights, dtype=np.float64)
        w = w / w.sum()
        o_c = o_mat - w @ o_mat
        s_mat = np.conj(o_c).T @ (w[:, None] * o_c)
    s_mat = s_mat + diag_shift * np.eye(s_mat.shape[0])
    try:
        delta = np.linalg.solve(s_mat, f)
    except np.linalg.LinAlgError:
        return f, False
    if not np.all(np.isfinite(delta.view(np.float64))):
        return f, False
    return delta, True


def energy_gradient(
    ansatz, spec: HamiltonianSpec, samples: np.ndarray, weights: np.ndarray | None = None
) -> np.ndarray:
    """Sampled energy gradient; pass explicit Born weights for an exact
    full-basis evaluation instead of Monte Carlo averaging."""
    samples = np.asarray(samples, dtype=np.float64)
    if samples.ndim != 2 or samples.shape[0] == 0:
        raise ValidationError("samples must be a nonempty (batch, sites) array")
    eloc = local_energies(spec, ansatz, samples)
    o_mat = np.atleast_2d(ansatz.grad_log_amplitude(samples))
    return gradient_from_samples(o_mat, eloc, weights)


def sgd_update(ansatz, spec, samples, learning_rate: float) -> np.ndarray:
    """One plain gradient step; returns the new parameter vector."""
    f = energy_gradient(ansatz, spec, samples)
    return _stepped(ansatz.parameters, f, learning_rate)


def sr_update(
    ansatz, spec, samples, learning_rate: float, diag_shift: float
) -> np.ndarray:
    """One geometry-preconditioned step; returns the new parameter vector."""
    samples = np.asarray(samples, dtype=np.float64)
    eloc = local_energies(spec, ansatz, samples)
    o_mat = np.atleast_2d(ansatz.grad_log_amplitude(samples))
    delta, _ = sr_delta(o_mat, eloc, diag_shift)
    return _stepped(ansatz.parameters, delta, learning_rate)


def _stepped(theta: np.ndarray, delta: np.ndarray, learning_rate: float) -> np.ndarray:
    if np.iscomplexobj(theta):
        return theta - learning_rate * delta
    return theta - learning_rate * delta.real


def optimize(
    ansatz,
    spec: HamiltonianSpec,
    optimizer: str = "sr",
    *,
    n_iterations: int,
    sampler: SamplerConfig,
    learning_rate=0.05,
    diag_shift: float = 0.01,
    final_sample_factor: int = 4,
    method_tag: str | None = None,
) -> VariationalResult:
    """Iterate sample -> gradient -> update, then report final estimates.

    learning_rate may be a float or a callable iteration -> float. The final
    energy/variance estimate uses final_sample_factor times more sweeps, and
    the score is computed with the model's degrees of freedom and analytic
    zero point.
    """
    if optimizer not in OPTIMIZERS:
        raise ValidationError(f"unknown optimizer {optimizer!r}")
    if n_iterations < 0:
        raise ValidationError("iteration budget must be >= 0")
    lr_of = learning_rate if callable(learning_rate) else (lambda _it: learning_rate)
    trace = []
    configs = None
    fallbacks = 0
    for it in range(n_iterations):
        cfg = sampler if it == 0 else continue_config(sampler, it)
        sample_set = metropolis_sample(ansatz, spec, cfg, initial=configs)
        configs = sample_set.final_configs
        flat = sample_set.flat
        eloc = local_energies(spec, ansatz, flat)
        o_mat = np.atleast_2d(ansatz.grad_log_amplitude(flat))
        if optimizer == "sr":
            delta, ok = sr_delta(o_mat, eloc, diag_shift)
            fallbacks += 0 if ok else 1
        else:
            delta = gradient_from_samples(o_mat, eloc)
        energy, variance, _ = _moments(eloc, cfg.n_chains)
        trace.append((it, energy, variance))
        ansatz.parameters = _stepped(ansatz.parameters, delta, lr_of(it))
    final_cfg = continue_config(sampler, n_iterations)
    final_cfg = SamplerConfig(
        n_chains=final_cfg.n_chains,
        n_samples=final_cfg.n_samples * final_sample_factor,
        n_burnin=final_cfg.n_burnin if n_iterations else sampler.n_burnin,
        move=final_cfg.move,
        seed=final_cfg.seed,
        steps_per_sweep=final_cfg.steps_per_sweep,
    )
    estimate, _ = estimate_energy(ansatz, spec, final_cfg, initial=configs)
    e_inf = einfty_analytic(spec).value
    score = v_score(estimate.energy, estimate.variance, spec.n_dof, e_inf)
    metadata = {"optimizer": optimizer, "sr_fallbacks": str(fallbacks)}
    if method_tag:
        metadata["method"] = method_tag
    return VariationalResult(
        energy_mean=estimate.energy,
        energy_variance=estimate.variance,
        energy_std_error=estimate.std_error,
        v_score=score,
        acceptance_rate=estimate.acceptance_rate,
        n_parameters=ansatz.n_parameters,
        iterations=n_iterations,
        trace=tuple(trace),
        parameters=ansatz.parameters,
        metadata=metadata,
    )
