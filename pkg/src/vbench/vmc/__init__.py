"""Variational Monte Carlo: ansatzes, Metropolis sampling, and optimization."""
from .ansatz import Ansatz, DenseAnsatz, JastrowAnsatz, RbmAnsatz, bits_to_spins, spins_to_bits
from .local import dense_state_vector, local_energies, local_energy
from .optim import (
    EnergyEstimate,
    energy_gradient,
    estimate_energy,
    gradient_from_samples,
    optimize,
    sgd_update,
    sr_delta,
    sr_update,
)
from .sampler import SampleSet, SamplerConfig, metropolis_sample, required_move

__all__ = [
    "Ansatz",
    "DenseAnsatz",
    "EnergyEstimate",
    "JastrowAnsatz",
    "RbmAnsatz",
    "SampleSet",
    "SamplerConfig",
    "bits_to_spins",
    "dense_state_vector",
    "energy_gradient",
    "estimate_energy",
    "gradient_from_samples",
    "local_energies",
    "local_energy",
    "metropolis_sample",
    "optimize",
    "required_move",
    "sgd_update",
    "spins_to_bits",
    "sr_delta",
    "sr_update",
]
