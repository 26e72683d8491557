"""Variational wave functions over spin configurations.

Configurations are arrays of +-1 (site i at column i, matching bit i of the
basis encoding). Every ansatz exposes batched log-amplitudes and the
per-parameter log-derivatives used by the gradient estimators.
"""
from __future__ import annotations

from typing import Protocol, runtime_checkable

import numpy as np

from .._kernels.core_py import _log2cosh as log2cosh
from ..errors import ValidationError


def bits_to_spins(x: int, n_sites: int) -> np.ndarray:
    return (((int(x) >> np.arange(n_sites)) & 1) * 2.0 - 1.0).astype(np.float64)


def spins_to_bits(spins: np.ndarray) -> int:
    bits = np.asarray(spins) > 0
    return int((bits << np.arange(bits.shape[-1])).sum())


@runtime_checkable
class Ansatz(Protocol):
    n_sites: int

    @property
    def parameters(self) -> np.ndarray: ...

    @parameters.setter
    def parameters(self, theta: np.ndarray) -> None: ...

    def log_amplitude(self, spins: np.ndarray) -> np.ndarray: ...

    def log_amplitude_ratio(self, spins: np.ndarray, spins_new: np.ndarray) -> np.ndarray: ...

    def grad_log_amplitude(self, spins: np.ndarray) -> np.ndarray: ...


class RbmAnsatz:
    """Complex restricted Boltzmann machine.

    log psi(s) = sum_i a_i s_i + sum_j log(2 cosh(b_j + sum_i W_ji s_i)),
    with hidden density alpha (n_hidden = alpha * n_sites). Parameters are
    complex and treated holomorphically, so the single-term gradient formula
    applies. Initialization is a seeded normal of small scale to keep the
    initial amplitudes near uniform.
    """

    def __init__(self, n_sites: int, alpha: int = 1, seed: int = 0, scale: float = 0.01):
        if alpha < 1:
            raise ValidationError("hidden density alpha must be >= 1")
        self.n_sites = int(n_sites)
        self.n_hidden = int(alpha) * self.n_sites
        rng = np.random.default_rng(seed)

        def cnormal(*shape):
            return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))

        self.a = cnormal(self.n_sites)
        self.b = cnormal(self.n_hidden)
        self.w = cnormal(self.n_hidden, self.n_sites)

    @property
    def n_parameters(self) -> int:
        return self.n_sites + self.n_hidden + self.n_hidden * self.n_sites

    @property
    def parameters(self) -> np.ndarray:
        return np.concatenate([self.a, self.b, self.w.ravel()])

    @parameters.setter
    def parameters(self, theta: np.ndarray) -> None:
        theta = np.asarray(theta, dtype=np.complex128)
        if theta.shape != (self.n_parameters,):
            raise ValidationError(f"expected {self.n_parameters} parameters")
        n, m = self.n_sites, self.n_hidden
        self.a = theta[:n].copy()
        self.b = theta[n : n + m].copy()
        self.w = theta[n + m :].reshape(m, n).copy()

    def hidden_activations(self, spins: np.ndarray) -> np.ndarray:
        return self.b + np.asarray(spins) @ self.w.T

    def log_amplitude(self, spins: np.ndarray) -> np.ndarray:
        spins = np.asarray(spins, dtype=np.float64)
        return spins @ self.a + log2cosh(self.hidden_activations(spins)).sum(axis=-1)

    def log_amplitude_ratio(self, spins, spins_new):
        return self.log_amplitude(spins_new) - self.log_amplitude(spins)

    def grad_log_amplitude(self, spins: np.ndarray) -> np.ndarray:
        spins = np.asarray(spins, dtype=np.float64)
        single = spins.ndim == 1
        s = np.atleast_2d(spins)
        th = np.tanh(self.hidden_activations(s))
        out = np.concatenate(
            [s.astype(np.complex128), th, (th[:, :, None] * s[:, None, :]).reshape(s.shape[0], -1)],
            axis=1,
        )
        return out[0] if single else out


class JastrowAnsatz:
    """Two-body spin Jastrow factor: log psi(s) = sum_{i<j} J_ij s_i s_j.

    Amplitudes are strictly positive, so this ansatz cannot represent any
    nontrivial sign structure; that limitation is intentional and tested.
    """

    def __init__(self, n_sites: int, seed: int = 0, scale: float = 0.01):
        self.n_sites = int(n_sites)
        rng = np.random.default_rng(seed)
        iu = np.triu_indices(self.n_sites, k=1)
        self._iu = iu
        params = scale * rng.standard_normal(iu[0].shape[0])
        self._set_matrix(params)

    def _set_matrix(self, params: np.ndarray) -> None:
        self._params = np.asarray(params, dtype=np.float64).copy()
        jmat = np.zeros((self.n_sites, self.n_sites))
        jmat[self._iu] = self._params
        self.j_matrix = jmat + jmat.T

    @property
    def n_parameters(self) -> int:
        return self._iu[0].shape[0]

    @property
    def parameters(self) -> np.ndarray:
        return self._params.copy()

    @parameters.setter
    def parameters(self, theta: np.ndarray) -> None:
        theta = np.asarray(theta)
        if theta.shape != (self.n_parameters,):
            raise ValidationError(f"expected {self.n_parameters} parameters")
        if np.iscomplexobj(theta):
            theta = theta.real
        self._set_matrix(theta)

    def log_amplitude(self, spins: np.ndarray) -> np.ndarray:
        spins = np.asarray(spins, dtype=np.float64)
        return 0.5 * np.einsum("...i,ij,...j->...", spins, self.j_matrix, spins)

    def log_amplitude_ratio(self, spins, spins_new):
        return self.log_amplitude(spins_new) - self.log_amplitude(spins)

    def grad_log_amplitude(self, spins: np.ndarray) -> np.ndarray:
        spins = np.asarray(spins, dtype=np.float64)
        single = spins.ndim == 1
        s = np.atleast_2d(spins)
        out = s[:, self._iu[0]] * s[:, self._iu[1]]
        return out[0] if single else out


class DenseAnsatz:
    """Fully parameterized state over a full spin basis.

    The parameters are the per-configuration log-amplitudes themselves, so
    log-derivatives are one-hot vectors. Exact eigenstates can be embedded
    directly, which makes this the reference ansatz for sampler and
    estimator validation.
    """

    def __init__(self, amplitudes: np.ndarray, n_sites: int):
        amplitudes = np.asarray(amplitudes, dtype=np.complex128)
        if amplitudes.shape != (1 << n_sites,):
            raise ValidationError("amplitude vector must cover the full spin basis")
        self.n_sites = int(n_sites)
        with np.errstate(divide="ignore", invalid="ignore"):
            self._log_amps = np.log(amplitudes)

    @property
    def n_parameters(self) -> int:
        return self._log_amps.shape[0]

    @property
    def parameters(self) -> np.ndarray:
        return self._log_amps.copy()

    @parameters.setter
    def parameters(self, theta: np.ndarray) -> None:
        theta = np.asarray(theta, dtype=np.complex128)
        if theta.shape != self._log_amps.shape:
            raise ValidationError("parameter length mismatch")
        self._log_amps = theta.copy()

    def _indices(self, spins: np.ndarray) -> np.ndarray:
        s = np.atleast_2d(np.asarray(spins))
        bits = (s > 0).astype(np.int64)
        return bits @ (np.int64(1) << np.arange(self.n_sites, dtype=np.int64))

    def log_amplitude(self, spins: np.ndarray) -> np.ndarray:
        idx = self._indices(spins)
        out = self._log_amps[idx]
        return out[0] if np.asarray(spins).ndim == 1 else out

    def log_amplitude_ratio(self, spins, spins_new):
        return self.log_amplitude(spins_new) - self.log_amplitude(spins)

    def grad_log_amplitude(self, spins: np.ndarray) -> np.ndarray:
        single = np.asarray(spins).ndim == 1
        idx = self._indices(spins)
        out = np.zeros((idx.shape[0], self.n_parameters), dtype=np.complex128)
        out[np.arange(idx.shape[0]), idx] = 1.0
        return out[0] if single else out

    def dense_vector(self) -> np.ndarray:
        return np.exp(self._log_amps)
