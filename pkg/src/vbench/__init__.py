"""Lattice many-body benchmarking toolkit.

Builds spin and fermion lattice Hamiltonians, solves them exactly (Lanczos /
dense), optimizes variational states (Monte Carlo and circuit ansatzes), and
scores every result with the dimensionless energy-variance accuracy metric.
"""
from ._kernels import backend as kernel_backend
from .einfty import EInftyEstimate, einfty_analytic, einfty_enumerated, einfty_sampled
from .exact import (
    ExactSolution,
    LanczosConfig,
    eigensystem,
    full_spectrum,
    ground_degeneracy,
    imaginary_time_family,
    lanczos_ground,
    mean_and_variance,
    spectral_gap,
)
from .hamiltonian import (
    HamiltonianSpec,
    HilbertSector,
    StateVector,
    apply,
    diagonal,
    parse_descriptor,
    row,
    sector_dimension,
    to_dense,
)
from .lattice import Bond, LatticeGraph, build_lattice, parse_lattice_descriptor
from .scores import (
    FitResult,
    bound_ratio_max,
    fit_intercept,
    infidelity_limit_ratio,
    relative_error,
    v_score,
)

__version__ = "0.1.0"

__all__ = [
    "Bond",
    "EInftyEstimate",
    "ExactSolution",
    "FitResult",
    "HamiltonianSpec",
    "HilbertSector",
    "LanczosConfig",
    "LatticeGraph",
    "StateVector",
    "apply",
    "bound_ratio_max",
    "build_lattice",
    "diagonal",
    "eigensystem",
    "einfty_analytic",
    "einfty_enumerated",
    "einfty_sampled",
    "fit_intercept",
    "full_spectrum",
    "ground_degeneracy",
    "imaginary_time_family",
    "infidelity_limit_ratio",
    "kernel_backend",
    "lanczos_ground",
    "mean_and_variance",
    "parse_descriptor",
    "parse_lattice_descriptor",
    "relative_error",
    "row",
    "sector_dimension",
    "spectral_gap",
    "to_dense",
    "v_score",
]
