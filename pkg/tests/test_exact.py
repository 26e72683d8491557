"""Lanczos vs dense oracles, exact moments, and imaginary-time families."""
import numpy as np
import pytest
import scipy.linalg

from vbench import (
    HamiltonianSpec,
    LanczosConfig,
    StateVector,
    build_lattice,
    full_spectrum,
    imaginary_time_family,
    lanczos_ground,
    mean_and_variance,
    row,
    sector_dimension,
)
from vbench.errors import ValidationError, ZeroVectorError

from conftest import dense_oracle, small_specs


def chain(n, bc="O"):
    return build_lattice("chain", [n], bc)


# ---------------------------------------------------------------------------
# golden ground-state energies (dimer closed forms)
# ---------------------------------------------------------------------------

def test_tfim_dimer_ground_energy():
    spec = HamiltonianSpec.tfim(chain(2), gamma=1.0)
    sol = lanczos_ground(spec)
    assert sol.converged
    assert sol.e0 == pytest.approx(-np.sqrt(5.0), abs=1e-10)
    assert abs(np.linalg.norm(sol.ground_vector.amplitudes) - 1.0) < 1e-12


def test_heisenberg_dimer_ground_energy():
    sol = lanczos_ground(HamiltonianSpec.heisenberg(chain(2)))
    assert sol.converged
    assert sol.e0 == pytest.approx(-3.0, abs=1e-10)


def test_hubbard_dimer_ground_energy():
    spec = HamiltonianSpec.hubbard(chain(2), n_up=1, n_down=1, u=8.0)
    sol = lanczos_ground(spec)
    assert sol.converged
    assert sol.e0 == pytest.approx((8.0 - np.sqrt(80.0)) / 2.0, abs=1e-10)


# ---------------------------------------------------------------------------
# full spectra
# ---------------------------------------------------------------------------

def test_tfim_dimer_spectrum():
    spec = HamiltonianSpec.tfim(chain(2), gamma=1.0)
    want = sorted([-np.sqrt(5.0), -1.0, 1.0, np.sqrt(5.0)])
    assert np.allclose(full_spectrum(spec), want, atol=1e-12)


def test_heisenberg_dimer_spectrum():
    spec = HamiltonianSpec.heisenberg(chain(2))
    assert np.allclose(full_spectrum(spec), [-3.0, 1.0, 1.0, 1.0], atol=1e-12)


def test_zero_couplings_spectrum():
    spec = HamiltonianSpec.tfim(chain(4), gamma=0.0, j=0.0)
    assert np.allclose(full_spectrum(spec), 0.0)


@pytest.mark.parametrize("spec", small_specs(), ids=lambda s: s.descriptor)
def test_spectrum_matches_oracle(spec, oracle_cache):
    want = np.sort(scipy.linalg.eigvalsh(oracle_cache(spec)))
    got = full_spectrum(spec)
    assert len(got) == sector_dimension(spec)
    scale = max(1.0, np.abs(want).max())
    assert np.abs(got - want).max() <= 1e-9 * scale


@pytest.mark.parametrize("spec", small_specs(), ids=lambda s: s.descriptor)
def test_lanczos_matches_spectrum_minimum(spec):
    sol = lanczos_ground(spec)
    assert sol.converged
    e_min = full_spectrum(spec)[0]
    assert sol.e0 == pytest.approx(e_min, abs=1e-9 * max(1.0, abs(e_min)))
    # residual bound from the config contract
    assert sol.residual <= 1e-10 * max(1.0, abs(sol.e0))


def test_lanczos_dimension_one_sector():
    spec = HamiltonianSpec.tv(chain(4), n_fermions=4, v=1.0)
    sol = lanczos_ground(spec)
    assert sol.converged
    assert sol.e0 == pytest.approx(3.0)  # filled chain: V on all three bonds


def test_lanczos_config_validation():
    with pytest.raises(ValidationError):
        LanczosConfig(tolerance=0.0)
    with pytest.raises(ValidationError):
        LanczosConfig(max_iterations=1)


def test_lanczos_seed_determinism():
    spec = HamiltonianSpec.heisenberg(chain(6, "P"))
    a = lanczos_ground(spec, LanczosConfig(seed=5))
    b = lanczos_ground(spec, LanczosConfig(seed=5))
    assert a.e0 == b.e0
    assert np.array_equal(a.ground_vector.amplitudes, b.ground_vector.amplitudes)


# ---------------------------------------------------------------------------
# mean and variance
# ---------------------------------------------------------------------------

def test_eigenstate_variance_is_zero():
    spec = HamiltonianSpec.tfim(chain(6, "P"), gamma=0.8)
    sol = lanczos_ground(spec)
    energy, var = mean_and_variance(spec, sol.ground_vector)
    assert energy == pytest.approx(sol.e0, abs=1e-10)
    assert 0.0 <= var <= 1e-10 * max(1.0, energy * energy)


def test_basis_state_moments_tfim_dimer():
    spec = HamiltonianSpec.tfim(chain(2), gamma=1.0)
    e = np.zeros(4)
    e[spec.sector.index_of(0b11)] = 1.0
    energy, var = mean_and_variance(spec, StateVector(spec.sector, e))
    assert energy == pytest.approx(1.0)
    assert var == pytest.approx(2.0)  # <H^2> = 3 on that basis state


def test_uniform_superposition_energy_is_mean_row_sum():
    spec = HamiltonianSpec.heisenberg(chain(4, "P"))
    dim = sector_dimension(spec)
    v = StateVector(spec.sector, np.ones(dim))
    energy, _ = mean_and_variance(spec, v)
    total = sum(a for k in range(dim) for _, a in row(spec, spec.sector.state_at(k)))
    assert energy == pytest.approx(total / dim, abs=1e-12)


def test_variational_principle_random_states():
    rng = np.random.default_rng(11)
    for spec in small_specs()[:4]:
        e0 = lanczos_ground(spec).e0
        dim = sector_dimension(spec)
        for _ in range(25):
            amps = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
            energy, var = mean_and_variance(spec, StateVector(spec.sector, amps))
            assert energy >= e0 - 1e-10
            assert var >= 0.0


def test_eigenvector_moments_match_spectrum():
    spec = HamiltonianSpec.hubbard(chain(3), n_up=1, n_down=1, u=4.0)
    dense = dense_oracle(spec)
    w, u = scipy.linalg.eigh(dense)
    for k in range(len(w)):
        energy, var = mean_and_variance(spec, StateVector(spec.sector, u[:, k]))
        assert energy == pytest.approx(w[k], abs=1e-9)
        assert var <= 1e-9


def test_zero_vector_rejected():
    spec = HamiltonianSpec.tfim(chain(2), gamma=1.0)
    with pytest.raises(ZeroVectorError):
        mean_and_variance(spec, StateVector(spec.sector, np.zeros(4)))


# ---------------------------------------------------------------------------
# imaginary-time families
# ---------------------------------------------------------------------------

def test_family_tau_zero_is_start_vector():
    spec = HamiltonianSpec.tfim(chain(6, "P"), gamma=1.0)
    (tau, state), = imaginary_time_family(spec, [0.0], seed=3)
    assert tau == 0.0
    rng = np.random.default_rng(3)
    psi0 = rng.standard_normal(64)
    psi0 /= np.linalg.norm(psi0)
    assert np.allclose(state.amplitudes, psi0, atol=1e-12)


def test_family_converges_to_ground_state():
    spec = HamiltonianSpec.heisenberg(chain(6, "P"))
    spectrum = full_spectrum(spec)
    gap = spectrum[spectrum > spectrum[0] + 1e-8][0] - spectrum[0]
    (_, state), = imaginary_time_family(spec, [50.0 / gap], seed=1)
    ground = lanczos_ground(spec).ground_vector.amplitudes
    overlap = abs(np.vdot(ground, state.amplitudes))
    assert overlap >= 1.0 - 1e-8


def test_family_energy_monotone_in_tau():
    spec = HamiltonianSpec.tfim(chain(6, "P"), gamma=1.0)
    taus = [0.0, 0.1, 0.2, 0.5, 1.0, 2.0, 5.0]
    energies = [
        mean_and_variance(spec, sv)[0] for _, sv in imaginary_time_family(spec, taus, seed=9)
    ]
    assert all(b <= a + 1e-12 for a, b in zip(energies, energies[1:]))


def test_family_rejects_negative_tau():
    spec = HamiltonianSpec.tfim(chain(2), gamma=1.0)
    with pytest.raises(ValidationError):
        imaginary_time_family(spec, [-0.1])
