"""Result record shared by the variational engines."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass
class VariationalResult:
    """Final estimates of one variational optimization.

    energy_variance is the Hamiltonian variance Var E entering the accuracy
    score; energy_std_error is the Monte Carlo error of the mean (zero for
    noiseless circuit evaluation). acceptance_rate is None when no Metropolis
    sampling was involved. trace holds (iteration, energy, variance) triples.
    """

    energy_mean: float
    energy_variance: float
    energy_std_error: float
    v_score: float
    acceptance_rate: float | None
    n_parameters: int
    iterations: int
    trace: tuple = ()
    parameters: np.ndarray | None = None
    metadata: dict = field(default_factory=dict)
