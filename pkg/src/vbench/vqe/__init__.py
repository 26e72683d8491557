"""Noiseless parameterized-circuit optimization (statevector path)."""
from .circuits import (
    QuantumState,
    circuit_energy_and_variance,
    hv_adjoint_gradient,
    hv_states,
    prepare_hv,
    prepare_rcx,
    rcx_adjoint_gradient,
    rcx_states,
    tfim_energies,
    zz_phase_batch,
)
from .optimize import (
    CircuitAnsatzKind,
    batch_energies,
    depth_study,
    embed_parameters,
    interpolate_schedule,
    optimize_vqe,
    vqe_gradient,
)

__all__ = [
    "CircuitAnsatzKind",
    "QuantumState",
    "batch_energies",
    "circuit_energy_and_variance",
    "depth_study",
    "embed_parameters",
    "hv_adjoint_gradient",
    "hv_states",
    "interpolate_schedule",
    "optimize_vqe",
    "prepare_hv",
    "prepare_rcx",
    "rcx_adjoint_gradient",
    "rcx_states",
    "tfim_energies",
    "vqe_gradient",
    "zz_phase_batch",
]
