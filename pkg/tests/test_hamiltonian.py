"""Sectors, matrix elements, and matrix-free application vs the dense oracle."""
import numpy as np
import pytest

from vbench import (
    HamiltonianSpec,
    StateVector,
    apply,
    build_lattice,
    parse_descriptor,
    row,
    sector_dimension,
    to_dense,
)
from vbench.errors import (
    SectorMismatchError,
    StateOutsideSectorError,
    ValidationError,
)
from vbench.hamiltonian import unrank_combination

from conftest import small_specs


def chain(n, bc="O"):
    return build_lattice("chain", [n], bc)


# ---------------------------------------------------------------------------
# sectors
# ---------------------------------------------------------------------------

def test_sector_dimensions():
    assert sector_dimension(HamiltonianSpec.tfim(chain(4), gamma=1.0)) == 16
    assert sector_dimension(HamiltonianSpec.tv(chain(4), n_fermions=2, v=1.0)) == 6
    assert sector_dimension(HamiltonianSpec.hubbard(chain(2), 1, 1, u=1.0)) == 4


@pytest.mark.parametrize("spec", small_specs(), ids=lambda s: s.descriptor)
def test_rank_unrank_bijective(spec):
    sector = spec.sector
    states = sector.states()
    assert len(states) == sector.dimension
    assert len(set(states.tolist())) == sector.dimension
    for k in range(sector.dimension):
        assert sector.index_of(sector.state_at(k)) == k


def test_unrank_matches_sorted_enumeration():
    masks = unrank_combination(np.arange(15), 6, 2)
    brute = sorted(m for m in range(64) if bin(m).count("1") == 2)
    assert masks.tolist() == brute


def test_sector_membership_errors():
    spec = HamiltonianSpec.tv(chain(4), n_fermions=2, v=1.0)
    with pytest.raises(StateOutsideSectorError):
        spec.sector.index_of(0b0111)
    with pytest.raises(StateOutsideSectorError):
        row(spec, 0b0111)


def test_spec_validation():
    with pytest.raises(ValidationError):
        HamiltonianSpec.tfim(chain(4, "A"), gamma=1.0)  # spins reject anti-periodic
    with pytest.raises(ValidationError):
        HamiltonianSpec.j1j2(chain(4), j2=0.5)  # needs a square lattice
    with pytest.raises(ValidationError):
        HamiltonianSpec.tv(chain(4), n_fermions=5, v=1.0)
    with pytest.raises(ValidationError):
        HamiltonianSpec.hubbard(chain(4), n_up=5, n_down=0, u=1.0)


# ---------------------------------------------------------------------------
# rows
# ---------------------------------------------------------------------------

def test_tfim_row_up_up():
    spec = HamiltonianSpec.tfim(chain(2), gamma=1.0)
    entries = dict(row(spec, 0b11))
    assert entries == {0b11: 1.0, 0b10: 1.0, 0b01: 1.0}


def test_tfim_gamma_zero_rows_are_diagonal_only():
    spec = HamiltonianSpec.tfim(chain(2), gamma=0.0)
    assert row(spec, 0b11) == [(0b11, 1.0)]
    assert row(spec, 0b01) == [(0b01, -1.0)]


def test_heisenberg_row_up_down():
    spec = HamiltonianSpec.heisenberg(chain(2))
    entries = dict(row(spec, 0b01))
    assert entries == {0b01: -1.0, 0b10: 2.0}


def test_hubbard_row_double_occupancy():
    spec = HamiltonianSpec.hubbard(chain(2), n_up=1, n_down=1, u=4.0)
    x = 0b01 | (0b01 << 2)  # both fermions on site 0
    entries = dict(row(spec, x))
    assert entries[x] == 4.0
    hop_targets = {k: v for k, v in entries.items() if k != x}
    assert hop_targets == {0b10 | (0b01 << 2): -1.0, 0b01 | (0b10 << 2): -1.0}


def test_row_suppresses_zeros():
    spec = HamiltonianSpec.heisenberg(chain(2), j=0.0)
    assert row(spec, 0b01) == []


@pytest.mark.parametrize("spec", small_specs(), ids=lambda s: s.descriptor)
def test_hermiticity_exhaustive(spec, oracle_cache):
    sector = spec.sector
    for k in range(sector.dimension):
        x = sector.state_at(k)
        for target, amp in row(spec, x):
            back = dict(row(spec, target))
            assert back[x] == pytest.approx(amp, abs=1e-14)


@pytest.mark.parametrize("spec", small_specs(), ids=lambda s: s.descriptor)
def test_dense_matches_kron_oracle(spec, oracle_cache):
    assert np.abs(to_dense(spec) - oracle_cache(spec)).max() <= 1e-12


@pytest.mark.parametrize("spec", small_specs(), ids=lambda s: s.descriptor)
def test_sector_conservation(spec):
    if spec.is_spin:
        pytest.skip("no conserved particle number")
    sector = spec.sector
    for k in range(sector.dimension):
        x = sector.state_at(k)
        for target, _ in row(spec, x):
            assert sector.contains(target)


def test_fermion_double_hop_returns_with_plus_sign():
    spec = HamiltonianSpec.tv(chain(6, "P"), n_fermions=3, v=0.0)
    sector = spec.sector
    for k in range(sector.dimension):
        x = sector.state_at(k)
        for target, amp in row(spec, x):
            back = dict(row(spec, target))
            # hopping back along the same bond undoes the sign
            assert back[x] == pytest.approx(amp)
            assert amp in (1.0, -1.0)


# ---------------------------------------------------------------------------
# apply
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("spec", small_specs(), ids=lambda s: s.descriptor)
def test_apply_matches_oracle_matvec(spec, oracle_cache):
    dense = oracle_cache(spec)
    rng = np.random.default_rng(7)
    for _ in range(5):
        amps = rng.standard_normal(spec.sector.dimension) + 1j * rng.standard_normal(
            spec.sector.dimension
        )
        got = apply(spec, StateVector(spec.sector, amps)).amplitudes
        want = dense @ amps
        assert np.abs(got - want).max() <= 1e-10 * max(1.0, np.abs(want).max())


def test_apply_linearity_and_zero():
    spec = HamiltonianSpec.heisenberg(chain(6, "P"))
    rng = np.random.default_rng(3)
    u = rng.standard_normal(64) + 1j * rng.standard_normal(64)
    v = rng.standard_normal(64) + 1j * rng.standard_normal(64)
    a, b = 0.3 - 1.1j, -2.0 + 0.4j
    left = apply(spec, StateVector(spec.sector, a * u + b * v)).amplitudes
    right = a * apply(spec, StateVector(spec.sector, u)).amplitudes
    right += b * apply(spec, StateVector(spec.sector, v)).amplitudes
    assert np.abs(left - right).max() < 1e-10
    zero = apply(spec, StateVector(spec.sector, np.zeros(64))).amplitudes
    assert np.all(zero == 0)


def test_apply_diagonal_eigenvector_at_zero_field():
    spec = HamiltonianSpec.tfim(chain(2), gamma=0.0)
    e = np.zeros(4)
    e[spec.sector.index_of(0b11)] = 1.0
    out = apply(spec, StateVector(spec.sector, e)).amplitudes
    assert np.allclose(out, e)  # eigenvalue +1 at the aligned state


def test_apply_sector_mismatch():
    spec_a = HamiltonianSpec.tfim(chain(4), gamma=1.0)
    spec_b = HamiltonianSpec.tv(chain(4), n_fermions=2, v=1.0)
    v = StateVector(spec_b.sector, np.ones(6))
    with pytest.raises(SectorMismatchError):
        apply(spec_a, v)


def test_heisenberg_singlet_apply():
    spec = HamiltonianSpec.heisenberg(chain(2))
    v = np.zeros(4, dtype=complex)
    v[spec.sector.index_of(0b01)] = 1 / np.sqrt(2)
    v[spec.sector.index_of(0b10)] = -1 / np.sqrt(2)
    out = apply(spec, StateVector(spec.sector, v)).amplitudes
    assert np.allclose(out, -3.0 * v, atol=1e-14)


# ---------------------------------------------------------------------------
# descriptors
# ---------------------------------------------------------------------------

def test_descriptor_formats():
    spec = HamiltonianSpec.hubbard(build_lattice("square", [4, 4], "PP"), 7, 7, u=8.0)
    assert spec.descriptor == "hubbard_square_4x4_PP_U=8_Nup=7,Ndn=7"
    spec = HamiltonianSpec.tfim(chain(10, "P"), gamma=1.0)
    assert spec.descriptor == "tfim_chain_10_P_Gamma=1"
    spec = HamiltonianSpec.j1j2(build_lattice("square", [4, 2], "O"), j2=0.5)
    assert spec.descriptor == "j1j2_square_4x2_OO_J2=0.5"
    assert HamiltonianSpec.heisenberg(chain(8, "P")).descriptor == "heisenberg_chain_8_P"


@pytest.mark.parametrize("spec", small_specs(), ids=lambda s: s.descriptor)
def test_descriptor_round_trip(spec):
    assert parse_descriptor(spec.descriptor) == spec


def test_descriptor_keeps_nondefault_couplings():
    spec = HamiltonianSpec.tv(chain(6, "P"), n_fermions=3, v=1.5, t=2.0)
    assert spec.descriptor == "tv_chain_6_P_t=2_V=1.5_Nf=3"
    assert parse_descriptor(spec.descriptor) == spec
