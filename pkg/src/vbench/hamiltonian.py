"""Hamiltonian specifications, Hilbert sectors, and matrix-free row/apply.

Basis encodings (bit i of an integer is site i, least significant first):
  * spin models: full space of n_sites-bit strings, bit 1 meaning spin up;
    basis index equals the bit pattern.
  * t-V: n_sites-bit occupation strings with popcount n_fermions, indexed in
    ascending numeric order (combinadic rank).
  * Hubbard: up and down occupation strings packed as up | (down << n_sites);
    index = rank(up) * dim_down + rank(down).

All five models are real symmetric in these bases. Fermionic hops carry the
Jordan-Wigner parity of the occupied sites strictly between the two endpoints
(per spin species, ordered by ascending site index) times the bond's
anti-periodic seam sign.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _kernels
from .errors import (
    DimensionOverflowError,
    SectorMismatchError,
    StateOutsideSectorError,
    UnsupportedModelError,
    ValidationError,
)
from .lattice import LatticeGraph, parse_lattice_descriptor

MODELS = ("tfim", "heisenberg", "j1j2", "tv", "hubbard")
SPIN_MODELS = ("tfim", "heisenberg", "j1j2")

# canonical coupling order per model; defaults omitted from descriptors
_COUPLINGS = {
    "tfim": (("J", 1.0), ("Gamma", None)),
    "heisenberg": (("J", 1.0),),
    "j1j2": (("J1", 1.0), ("J2", None)),
    "tv": (("t", 1.0), ("V", None)),
    "hubbard": (("t", 1.0), ("U", None)),
}

_MAX_LOOKUP_SITES = 24  # rank lookup tables are 2**n_sites entries


# ---------------------------------------------------------------------------
# combinadic rank/unrank for fixed-popcount bit strings
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _binom_table(n: int) -> np.ndarray:
    table = np.zeros((n + 1, n + 1), dtype=np.int64)
    for i in range(n + 1):
        for k in range(i + 1):
            table[i, k] = math.comb(i, k)
    return table


@lru_cache(maxsize=None)
def _sector_states(n_sites: int, n_particles: int) -> np.ndarray:
    """All n_sites-bit masks with the given popcount, ascending."""
    if n_sites > _MAX_LOOKUP_SITES:
        raise DimensionOverflowError(
            f"fixed-number sectors support at most {_MAX_LOOKUP_SITES} sites"
        )
    every = np.arange(1 << n_sites, dtype=np.int64)
    return every[np.bitwise_count(every) == n_particles]


@lru_cache(maxsize=None)
def _rank_lookup(n_sites: int, n_particles: int) -> np.ndarray:
    states = _sector_states(n_sites, n_particles)
    lookup = np.full(1 << n_sites, -1, dtype=np.int64)
    lookup[states] = np.arange(states.shape[0], dtype=np.int64)
    return lookup


def unrank_combination(ranks: np.ndarray, n_sites: int, n_particles: int) -> np.ndarray:
    """Masks at the given combinadic ranks, without enumerating the sector."""
    binom = _binom_table(n_sites)
    ranks = np.asarray(ranks, dtype=np.int64)
    remaining = ranks.copy()
    masks = np.zeros_like(ranks)
    for k in range(n_particles, 0, -1):
        # largest c with B(c, k) <= remaining; column is nondecreasing in c
        col = binom[:, k]
        c = np.searchsorted(col, remaining, side="right") - 1
        masks |= np.int64(1) << c
        remaining = remaining - col[c]
    return masks


# ---------------------------------------------------------------------------
# Hilbert sectors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HilbertSector:
    """Basis bookkeeping for a fixed-quantum-number subspace."""

    kind: str  # "spin" | "fixed_n" | "two_species"
    n_sites: int
    n_fermions: int | None = None
    n_up: int | None = None
    n_down: int | None = None

    @property
    def dimension(self) -> int:
        if self.kind == "spin":
            return 1 << self.n_sites
        if self.kind == "fixed_n":
            return math.comb(self.n_sites, self.n_fermions)
        return math.comb(self.n_sites, self.n_up) * math.comb(self.n_sites, self.n_down)

    def states(self) -> np.ndarray:
        """All basis states as encoded integers, in index order."""
        if self.kind == "spin":
            return np.arange(self.dimension, dtype=np.int64)
        if self.kind == "fixed_n":
            return _sector_states(self.n_sites, self.n_fermions).copy()
        up = _sector_states(self.n_sites, self.n_up)
        dn = _sector_states(self.n_sites, self.n_down)
        return (up[:, None] | (dn[None, :] << self.n_sites)).ravel()

    def contains(self, state: int) -> bool:
        if self.kind == "spin":
            return 0 <= state < (1 << self.n_sites)
        if self.kind == "fixed_n":
            return (
                0 <= state < (1 << self.n_sites)
                and int(state).bit_count() == self.n_fermions
            )
        up = state & ((1 << self.n_sites) - 1)
        dn = state >> self.n_sites
        return (
            0 <= dn < (1 << self.n_sites)
            and int(up).bit_count() == self.n_up
            and int(dn).bit_count() == self.n_down
        )

    def index_of(self, state: int) -> int:
        if not self.contains(state):
            raise StateOutsideSectorError(f"state {state:#x} is not in {self}")
        if self.kind == "spin":
            return int(state)
        if self.kind == "fixed_n":
            return int(_rank_lookup(self.n_sites, self.n_fermions)[state])
        up = state & ((1 << self.n_sites) - 1)
        dn = state >> self.n_sites
        dim_dn = math.comb(self.n_sites, self.n_down)
        return int(
            _rank_lookup(self.n_sites, self.n_up)[up] * dim_dn
            + _rank_lookup(self.n_sites, self.n_down)[dn]
        )

    def state_at(self, index: int) -> int:
        if not 0 <= index < self.dimension:
            raise StateOutsideSectorError(f"index {index} out of range")
        if self.kind == "spin":
            return int(index)
        if self.kind == "fixed_n":
            return int(_sector_states(self.n_sites, self.n_fermions)[index])
        dim_dn = math.comb(self.n_sites, self.n_down)
        ru, rd = divmod(index, dim_dn)
        up = int(_sector_states(self.n_sites, self.n_up)[ru])
        dn = int(_sector_states(self.n_sites, self.n_down)[rd])
        return up | (dn << self.n_sites)


@dataclass
class StateVector:
    """Dense complex amplitudes over a sector basis."""

    sector: HilbertSector
    amplitudes: np.ndarray

    def __post_init__(self):
        self.amplitudes = np.ascontiguousarray(self.amplitudes, dtype=np.complex128)
        if self.amplitudes.shape != (self.sector.dimension,):
            raise ValidationError(
                f"amplitude vector has length {self.amplitudes.shape}, "
                f"sector dimension is {self.sector.dimension}"
            )
        if not np.all(np.isfinite(self.amplitudes.view(np.float64))):
            raise ValidationError("amplitudes must be finite")

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "StateVector":
        return StateVector(self.sector, self.amplitudes / self.norm)


# ---------------------------------------------------------------------------
# Hamiltonian specification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HamiltonianSpec:
    model: str
    lattice: LatticeGraph
    couplings: tuple[tuple[str, float], ...]
    n_fermions: int | None = None
    n_up: int | None = None
    n_down: int | None = None

    def __post_init__(self):
        if self.model not in MODELS:
            raise UnsupportedModelError(f"unknown model {self.model!r}")
        expected = tuple(name for name, _ in _COUPLINGS[self.model])
        got = tuple(name for name, _ in self.couplings)
        if got != expected:
            raise ValidationError(f"{self.model} needs couplings {expected}, got {got}")
        ns = self.lattice.n_sites
        if self.model in SPIN_MODELS:
            if "A" in self.lattice.bc:
                raise ValidationError(
                    "anti-periodic boundaries only apply to fermionic hopping models"
                )
            if self.model == "j1j2" and self.lattice.kind != "square":
                raise ValidationError(
                    "j1j2 needs a square lattice (chains have no next-nearest bonds)"
                )
        elif self.model == "tv":
            if self.n_fermions is None or not 0 <= self.n_fermions <= ns:
                raise ValidationError(f"tv needs 0 <= n_fermions <= {ns}")
        else:
            if (
                self.n_up is None
                or self.n_down is None
                or not 0 <= self.n_up <= ns
                or not 0 <= self.n_down <= ns
            ):
                raise ValidationError(f"hubbard needs 0 <= n_up, n_down <= {ns}")

    # -- constructors ------------------------------------------------------

    @classmethod
    def tfim(cls, lattice, gamma, j=1.0):
        return cls("tfim", lattice, (("J", float(j)), ("Gamma", float(gamma))))

    @classmethod
    def heisenberg(cls, lattice, j=1.0):
        return cls("heisenberg", lattice, (("J", float(j)),))

    @classmethod
    def j1j2(cls, lattice, j2, j1=1.0):
        return cls("j1j2", lattice, (("J1", float(j1)), ("J2", float(j2))))

    @classmethod
    def tv(cls, lattice, n_fermions, v, t=1.0):
        return cls(
            "tv",
            lattice,
            (("t", float(t)), ("V", float(v))),
            n_fermions=int(n_fermions),
        )

    @classmethod
    def hubbard(cls, lattice, n_up, n_down, u, t=1.0):
        return cls(
            "hubbard",
            lattice,
            (("t", float(t)), ("U", float(u))),
            n_up=int(n_up),
            n_down=int(n_down),
        )

    # -- accessors -----------------------------------------------------------

    def coupling(self, name: str) -> float:
        for key, value in self.couplings:
            if key == name:
                return value
        raise KeyError(name)

    @property
    def is_spin(self) -> bool:
        return self.model in SPIN_MODELS

    @property
    def sector(self) -> HilbertSector:
        ns = self.lattice.n_sites
        if self.is_spin:
            return HilbertSector("spin", ns)
        if self.model == "tv":
            return HilbertSector("fixed_n", ns, n_fermions=self.n_fermions)
        return HilbertSector("two_species", ns, n_up=self.n_up, n_down=self.n_down)

    @property
    def n_dof(self) -> int:
        """Degrees of freedom entering the accuracy score: number of spins,
        or the particle count for fixed-number fermion sectors."""
        if self.is_spin:
            return self.lattice.n_sites
        if self.model == "tv":
            return self.n_fermions
        return self.n_up + self.n_down

    @property
    def descriptor(self) -> str:
        parts = [self.model, self.lattice.descriptor]
        for name, default in _COUPLINGS[self.model]:
            value = self.coupling(name)
            if default is not None and value == default:
                continue
            parts.append(f"{name}={_fmt_number(value)}")
        if self.model == "tv":
            parts.append(f"Nf={self.n_fermions}")
        elif self.model == "hubbard":
            parts.append(f"Nup={self.n_up},Ndn={self.n_down}")
        return "_".join(parts)


def _fmt_number(value: float) -> str:
    if value == int(value):
        return str(int(value))
    return repr(float(value))


def parse_descriptor(text: str) -> HamiltonianSpec:
    """Inverse of ``HamiltonianSpec.descriptor``."""
    parts = text.split("_")
    if len(parts) < 4:
        raise ValidationError(f"malformed Hamiltonian descriptor {text!r}")
    model = parts[0]
    if model not in MODELS:
        raise UnsupportedModelError(f"unknown model {model!r} in {text!r}")
    lattice = parse_lattice_descriptor("_".join(parts[1:4]))
    values: dict[str, float] = {}
    sector: dict[str, int] = {}
    for token in parts[4:]:
        for piece in token.split(","):
            if "=" not in piece:
                raise ValidationError(f"malformed token {piece!r} in {text!r}")
            key, raw = piece.split("=", 1)
            try:
                if key in ("Nf", "Nup", "Ndn"):
                    sector[key] = int(raw)
                else:
                    values[key] = float(raw)
            except ValueError as exc:
                raise ValidationError(f"bad value {raw!r} for {key}") from exc
    couplings = []
    for name, default in _COUPLINGS[model]:
        if name in values:
            couplings.append((name, values.pop(name)))
        elif default is not None:
            couplings.append((name, default))
        else:
            raise ValidationError(f"descriptor {text!r} is missing {name}")
    if values:
        raise ValidationError(f"unknown couplings {sorted(values)} in {text!r}")
    kwargs = {}
    if model == "tv":
        if "Nf" not in sector:
            raise ValidationError(f"descriptor {text!r} is missing Nf")
        kwargs["n_fermions"] = sector["Nf"]
    elif model == "hubbard":
        if "Nup" not in sector or "Ndn" not in sector:
            raise ValidationError(f"descriptor {text!r} is missing Nup/Ndn")
        kwargs["n_up"] = sector["Nup"]
        kwargs["n_down"] = sector["Ndn"]
    return HamiltonianSpec(model, lattice, tuple(couplings), **kwargs)


def sector_dimension(spec: HamiltonianSpec) -> int:
    return spec.sector.dimension


# ---------------------------------------------------------------------------
# matrix elements
# ---------------------------------------------------------------------------

def _between_mask(i: int, j: int) -> int:
    lo, hi = (i, j) if i < j else (j, i)
    return ((1 << hi) - 1) & ~((1 << (lo + 1)) - 1)


def _spin_bond_list(spec: HamiltonianSpec) -> list[tuple[int, int, float]]:
    """(i, j, weight) list of ZZ (and exchange, for Heisenberg-type) bonds."""
    if spec.model == "tfim":
        j = spec.coupling("J")
        return [(b.i, b.j, j) for b in spec.lattice.nn_bonds]
    if spec.model == "heisenberg":
        j = spec.coupling("J")
        return [(b.i, b.j, j) for b in spec.lattice.nn_bonds]
    j1, j2 = spec.coupling("J1"), spec.coupling("J2")
    bonds = [(b.i, b.j, j1) for b in spec.lattice.nn_bonds]
    bonds += [(b.i, b.j, j2) for b in spec.lattice.nnn_bonds]
    return bonds


def diagonal_batch(spec: HamiltonianSpec, states: np.ndarray) -> np.ndarray:
    """<x|H|x> for an array of encoded basis states."""
    states = np.asarray(states, dtype=np.int64)
    out = np.zeros(states.shape, dtype=np.float64)
    if spec.is_spin:
        for i, j, w in _spin_bond_list(spec):
            anti = ((states >> i) ^ (states >> j)) & 1
            out += w * (1.0 - 2.0 * anti)
        return out
    if spec.model == "tv":
        v = spec.coupling("V")
        for b in spec.lattice.nn_bonds:
            out += v * ((states >> b.i) & (states >> b.j) & 1)
        return out
    u = spec.coupling("U")
    ns = spec.lattice.n_sites
    up = states & ((np.int64(1) << ns) - 1)
    dn = states >> ns
    return u * np.bitwise_count(up & dn).astype(np.float64)


def diagonal(spec: HamiltonianSpec, x: int) -> float:
    return float(diagonal_batch(spec, np.array([x], dtype=np.int64))[0])


def _fermion_hops(x, n_sites, bonds, t, offset=0):
    """Yield (target, amplitude) hops for one spin species.

    offset shifts the species' bits inside the packed encoding; the JW parity
    is computed within the species' own bits.
    """
    species = (x >> offset) & ((1 << n_sites) - 1)
    for bond in bonds:
        occ_i = (species >> bond.i) & 1
        occ_j = (species >> bond.j) & 1
        if occ_i == occ_j:
            continue
        parity = int(species & _between_mask(bond.i, bond.j)).bit_count() & 1
        amp = -t * bond.sign * (1.0 - 2.0 * parity)
        target = x ^ (((1 << bond.i) | (1 << bond.j)) << offset)
        yield target, amp


def row(spec: HamiltonianSpec, x: int) -> list[tuple[int, float]]:
    """Nonzero column <x'|H|x> as (x', amplitude) pairs, diagonal first.

    H is real symmetric in these bases, so this doubles as the row of x.
    Zero amplitudes are suppressed.
    """
    sector = spec.sector
    if not sector.contains(x):
        raise StateOutsideSectorError(f"state {x:#x} is not in the sector")
    entries: list[tuple[int, float]] = []
    diag = diagonal(spec, x)
    if diag != 0.0:
        entries.append((x, diag))
    ns = spec.lattice.n_sites
    if spec.model == "tfim":
        gamma = spec.coupling("Gamma")
        if gamma != 0.0:
            entries.extend((x ^ (1 << i), gamma) for i in range(ns))
    elif spec.model in ("heisenberg", "j1j2"):
        for i, j, w in _spin_bond_list(spec):
            if w != 0.0 and ((x >> i) ^ (x >> j)) & 1:
                entries.append((x ^ ((1 << i) | (1 << j)), 2.0 * w))
    elif spec.model == "tv":
        t = spec.coupling("t")
        if t != 0.0:
            entries.extend(_fermion_hops(x, ns, spec.lattice.nn_bonds, t))
    else:
        t = spec.coupling("t")
        if t != 0.0:
            entries.extend(_fermion_hops(x, ns, spec.lattice.nn_bonds, t, 0))
            entries.extend(_fermion_hops(x, ns, spec.lattice.nn_bonds, t, ns))
    return entries


# ---------------------------------------------------------------------------
# matrix-free application
# ---------------------------------------------------------------------------

def _spin_term_arrays(spec: HamiltonianSpec):
    bonds = _spin_bond_list(spec)
    zz_i = np.array([b[0] for b in bonds], dtype=np.int64)
    zz_j = np.array([b[1] for b in bonds], dtype=np.int64)
    zz_w = np.array([b[2] for b in bonds], dtype=np.float64)
    ns = spec.lattice.n_sites
    if spec.model == "tfim":
        ex_i = np.empty(0, dtype=np.int64)
        ex_j = np.empty(0, dtype=np.int64)
        ex_w = np.empty(0, dtype=np.float64)
        x_w = np.full(ns, spec.coupling("Gamma"), dtype=np.float64)
    else:
        ex_i, ex_j, ex_w = zz_i, zz_j, zz_w
        x_w = np.zeros(ns, dtype=np.float64)
    return zz_i, zz_j, zz_w, ex_i, ex_j, ex_w, x_w


def _hop_targets(bits: np.ndarray, bond, t: float):
    """Movable mask, hop targets, and signed amplitudes for one species."""
    movable = (((bits >> bond.i) ^ (bits >> bond.j)) & 1).astype(bool)
    src = bits[movable]
    targets = src ^ ((1 << bond.i) | (1 << bond.j))
    parity = np.bitwise_count(src & _between_mask(bond.i, bond.j)) & 1
    # the JW string strictly between the endpoints is the same for source
    # and target, so the amplitude is symmetric between the two
    amp = -t * bond.sign * (1.0 - 2.0 * parity)
    return movable, targets, amp


def _apply_fermion(spec: HamiltonianSpec, amps: np.ndarray) -> np.ndarray:
    sector = spec.sector
    ns = spec.lattice.n_sites
    states = sector.states()
    out = diagonal_batch(spec, states) * amps
    t = spec.coupling("t")
    if t == 0.0:
        return out
    if spec.model == "tv":
        lookup = _rank_lookup(ns, spec.n_fermions)
        for bond in spec.lattice.nn_bonds:
            movable, targets, amp = _hop_targets(states, bond, t)
            out[movable] += amp * amps[lookup[targets]]
        return out
    dim_dn = math.comb(ns, spec.n_down)
    idx = np.arange(sector.dimension, dtype=np.int64)
    rank_up, rank_dn = idx // dim_dn, idx % dim_dn
    up = _sector_states(ns, spec.n_up)[rank_up]
    dn = _sector_states(ns, spec.n_down)[rank_dn]
    lut_up = _rank_lookup(ns, spec.n_up)
    lut_dn = _rank_lookup(ns, spec.n_down)
    for bond in spec.lattice.nn_bonds:
        movable, targets, amp = _hop_targets(up, bond, t)
        out[movable] += amp * amps[lut_up[targets] * dim_dn + rank_dn[movable]]
        movable, targets, amp = _hop_targets(dn, bond, t)
        out[movable] += amp * amps[rank_up[movable] * dim_dn + lut_dn[targets]]
    return out


def apply(spec: HamiltonianSpec, v: StateVector) -> StateVector:
    """H @ v without materializing the matrix."""
    if v.sector != spec.sector:
        raise SectorMismatchError(
            f"vector sector {v.sector} does not match spec sector {spec.sector}"
        )
    amps = v.amplitudes
    if spec.is_spin:
        out = np.zeros_like(amps)
        _kernels.spin_apply(out, amps, spec.lattice.n_sites, *_spin_term_arrays(spec))
    else:
        out = _apply_fermion(spec, amps)
    return StateVector(spec.sector, out)


def to_dense(spec: HamiltonianSpec, max_dimension: int = 4096) -> np.ndarray:
    """Dense symmetric matrix assembled from row(); capped for safety."""
    dim = spec.sector.dimension
    if dim > max_dimension:
        raise DimensionOverflowError(
            f"sector dimension {dim} exceeds the dense cap {max_dimension}"
        )
    sector = spec.sector
    mat = np.zeros((dim, dim), dtype=np.float64)
    for k in range(dim):
        x = sector.state_at(k)
        for target, amp in row(spec, x):
            mat[sector.index_of(target), k] = amp
    return mat
