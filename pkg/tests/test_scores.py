"""Score arithmetic, invariances, the ratio bound, and the log-log fit."""
import numpy as np
import pytest

from vbench import (
    HamiltonianSpec,
    LanczosConfig,
    StateVector,
    bound_ratio_max,
    build_lattice,
    fit_intercept,
    full_spectrum,
    infidelity_limit_ratio,
    lanczos_ground,
    mean_and_variance,
    relative_error,
    v_score,
)
from vbench.errors import (
    DegenerateDenominatorError,
    DegenerateZeroPointError,
    InsufficientPointsError,
    NonPositivePointError,
    ValidationError,
)

SQRT5 = np.sqrt(5.0)


def tfim_dimer():
    return HamiltonianSpec.tfim(build_lattice("chain", [2], "O"), gamma=1.0)


# ---------------------------------------------------------------------------
# score arithmetic
# ---------------------------------------------------------------------------

def test_score_examples():
    assert v_score(-10.0, 0.0, 10, 0.0) == 0.0
    assert v_score(-10.0, 0.5, 10, 0.0) == pytest.approx(0.05)


def test_score_of_exact_ground_state():
    spec = tfim_dimer()
    sol = lanczos_ground(spec, LanczosConfig(tolerance=1e-12))
    energy, var = mean_and_variance(spec, sol.ground_vector)
    assert v_score(energy, var, spec.n_dof, 0.0) <= 1e-9


def test_score_validation():
    with pytest.raises(DegenerateZeroPointError):
        v_score(1.0, 0.1, 4, 1.0)
    with pytest.raises(ValidationError):
        v_score(1.0, -0.1, 4, 0.0)
    with pytest.raises(ValidationError):
        v_score(1.0, 0.1, 0, 0.0)


def test_shift_invariance():
    rng = np.random.default_rng(0)
    for _ in range(200):
        e = rng.uniform(-20, -1)
        var = rng.uniform(0, 5)
        e_inf = rng.uniform(0, 5)
        shift = rng.uniform(-100, 100)
        a = v_score(e, var, 12, e_inf)
        b = v_score(e + shift, var, 12, e_inf + shift)
        assert b == pytest.approx(a, rel=1e-12)


def test_scale_covariance_pure_arithmetic():
    rng = np.random.default_rng(1)
    for _ in range(200):
        e, var, e_inf = rng.uniform(-20, -1), rng.uniform(0.1, 5), rng.uniform(0, 5)
        lam = rng.uniform(0.1, 10)
        assert v_score(lam * e, lam * lam * var, 7, lam * e_inf) == pytest.approx(
            v_score(e, var, 7, e_inf), rel=1e-12
        )


def test_relative_error_examples():
    assert relative_error(-3.0, -3.0, 0.0) == 0.0
    assert relative_error(0.0, -3.0, 0.0) == 1.0
    assert relative_error(-2.0, -SQRT5, 0.0) == pytest.approx((SQRT5 - 2.0) / SQRT5)
    with pytest.raises(DegenerateDenominatorError):
        relative_error(1.0, 2.0, 2.0)


# ---------------------------------------------------------------------------
# ratio bound
# ---------------------------------------------------------------------------

def test_bound_examples():
    # top-of-spectrum state collapses the bound
    assert bound_ratio_max(SQRT5, 2, 0.0, -SQRT5, SQRT5) == 0.0
    want = 2.0 * SQRT5 * (SQRT5 + 1.0)
    assert bound_ratio_max(-1.0, 2, 0.0, -SQRT5, SQRT5) == pytest.approx(want)
    assert want == pytest.approx(14.472, abs=1e-3)


def test_two_level_mixture_saturates_bound():
    spec = tfim_dimer()
    spectrum = full_spectrum(spec)
    e0, e_max = spectrum[0], spectrum[-1]
    dense_states = np.linalg.eigh(
        np.array(
            [[1, 1, 1, 0], [1, -1, 0, 1], [1, 0, -1, 1], [0, 1, 1, 1]], dtype=float
        )
    )[1]
    ground, top = dense_states[:, 0], dense_states[:, -1]
    for interp in (0.25, 0.5, 0.75):
        psi = np.sqrt(1 - interp) * ground + np.sqrt(interp) * top
        energy, var = mean_and_variance(spec, StateVector(spec.sector, psi))
        score = v_score(energy, var, spec.n_dof, 0.0)
        rel = relative_error(energy, e0, 0.0)
        bound = bound_ratio_max(energy, spec.n_dof, 0.0, e0, e_max)
        assert score / rel == pytest.approx(bound, rel=1e-9)


def test_random_states_respect_bound():
    spec = HamiltonianSpec.heisenberg(build_lattice("chain", [6], "P"))
    spectrum = full_spectrum(spec)
    e0, e_max = spectrum[0], spectrum[-1]
    rng = np.random.default_rng(5)
    for _ in range(100):
        amps = rng.standard_normal(64) + 1j * rng.standard_normal(64)
        energy, var = mean_and_variance(spec, StateVector(spec.sector, amps))
        score = v_score(energy, var, spec.n_dof, 0.0)
        rel = relative_error(energy, e0, 0.0)
        bound = bound_ratio_max(energy, spec.n_dof, 0.0, e0, e_max)
        assert 0.0 <= score / rel <= bound + 1e-9


# ---------------------------------------------------------------------------
# vanishing-infidelity limit
# ---------------------------------------------------------------------------

def test_limit_ratio_examples():
    gap = SQRT5 - 1.0
    assert infidelity_limit_ratio(2, gap, -SQRT5, 0.0) == pytest.approx(
        2.0 * gap / SQRT5
    )
    assert infidelity_limit_ratio(1, 1.0, -0.5, 0.0) == pytest.approx(2.0)
    with pytest.raises(ValidationError):
        infidelity_limit_ratio(1, 0.0, -1.0, 0.0)
    with pytest.raises(DegenerateDenominatorError):
        infidelity_limit_ratio(1, 1.0, 0.0, 0.0)


# ---------------------------------------------------------------------------
# slope-1 fit
# ---------------------------------------------------------------------------

def test_fit_on_the_line():
    points = [(1e-4, 1e-4), (1e-2, 1e-2), (0.5, 0.5)]
    result = fit_intercept(points)
    assert result.c == pytest.approx(0.0, abs=1e-12)
    assert result.residual_rms == pytest.approx(0.0, abs=1e-12)
    assert result.n_points == 3


def test_fit_two_decades_down():
    result = fit_intercept([(1e-4, 1e-6), (1e-2, 1e-4)])
    assert result.c == pytest.approx(-2.0, abs=1e-12)
    assert result.residual_rms == pytest.approx(0.0, abs=1e-12)
    assert result.slope_free == pytest.approx(1.0, abs=1e-9)


def test_fit_validation():
    with pytest.raises(InsufficientPointsError):
        fit_intercept([(1e-3, 1e-3)])
    with pytest.raises(NonPositivePointError):
        fit_intercept([(1e-3, 0.0), (1e-2, 1e-2)])
