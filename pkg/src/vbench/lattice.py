"""Finite lattice graphs: chains and rectangular lattices with O/P/A boundaries.

Site indexing is row-major with axis 0 fastest, i.e. site = x0 + dims[0]*x1.
Each bond carries a sign flag that is -1 when the bond wraps an odd number of
anti-periodic axes; hopping models pick it up, interaction terms ignore it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import DimensionTooSmallError, UnsupportedKindError, ValidationError

OPEN = "O"
PERIODIC = "P"
ANTIPERIODIC = "A"
_BC_LETTERS = ("O", "P", "A")

# displacement stencils, one entry per bond orientation
_NN_STEPS = {"chain": ((1,),), "square": ((1, 0), (0, 1))}
_NNN_STEPS = {"chain": (), "square": ((1, 1), (1, -1))}


@dataclass(frozen=True)
class Bond:
    """Unordered site pair (stored with i < j)."""

    i: int
    j: int
    sign: int = 1

    @property
    def pair(self) -> tuple[int, int]:
        return (self.i, self.j)


@dataclass(frozen=True)
class LatticeGraph:
    kind: str
    dims: tuple[int, ...]
    bc: tuple[str, ...]
    nn_bonds: tuple[Bond, ...]
    nnn_bonds: tuple[Bond, ...]

    @property
    def n_sites(self) -> int:
        return math.prod(self.dims)

    @property
    def descriptor(self) -> str:
        dims = "x".join(str(d) for d in self.dims)
        return f"{self.kind}_{dims}_{''.join(self.bc)}"

    def site_index(self, coords: Sequence[int]) -> int:
        idx = 0
        for length, c in zip(reversed(self.dims), reversed(list(coords))):
            idx = idx * length + c
        return idx

    def site_coords(self, index: int) -> tuple[int, ...]:
        coords = []
        for length in self.dims:
            index, c = divmod(index, length)
            coords.append(c)
        return tuple(coords)


def _normalize_bc(bc, n_axes: int) -> tuple[str, ...]:
    if isinstance(bc, str):
        letters = tuple(bc.upper())
        if len(letters) == 1:
            letters = letters * n_axes
    else:
        letters = tuple(str(b).upper() for b in bc)
    if len(letters) != n_axes or any(b not in _BC_LETTERS for b in letters):
        raise ValidationError(
            f"boundary condition must be {n_axes} letters from O/P/A, got {bc!r}"
        )
    return letters


def _bonds_for_steps(dims, bc, steps) -> tuple[Bond, ...]:
    seen = set()
    bonds = []
    n_sites = math.prod(dims)
    n_axes = len(dims)
    for site in range(n_sites):
        rem = site
        coords = []
        for length in dims:
            rem, c = divmod(rem, length)
            coords.append(c)
        for step in steps:
            target = []
            sign = 1
            valid = True
            for axis in range(n_axes):
                c = coords[axis] + step[axis]
                length = dims[axis]
                if 0 <= c < length:
                    target.append(c)
                    continue
                if bc[axis] == OPEN:
                    valid = False
                    break
                c %= length
                target.append(c)
                if bc[axis] == ANTIPERIODIC:
                    sign = -sign
            if not valid:
                continue
            other = 0
            for length, c in zip(reversed(dims), reversed(target)):
                other = other * length + c
            pair = (site, other) if site < other else (other, site)
            if pair[0] == pair[1] or pair in seen:
                # guarded against by the minimum-length preconditions
                raise ValidationError(f"degenerate bond {pair} on dims {dims}")
            seen.add(pair)
            bonds.append(Bond(pair[0], pair[1], sign))
    return tuple(bonds)


def build_lattice(kind: str, dims: Sequence[int], bc="P") -> LatticeGraph:
    """Build a chain or rectangular lattice graph with its NN/NNN bond lists.

    Periodic and anti-periodic axes must have length >= 3 (shorter rings would
    produce doubled bonds), open axes length >= 2.
    """
    kind = kind.lower()
    if kind not in _NN_STEPS:
        raise UnsupportedKindError(f"unsupported lattice kind {kind!r}")
    dims = tuple(int(d) for d in dims)
    n_axes = 1 if kind == "chain" else 2
    if len(dims) != n_axes:
        raise ValidationError(f"{kind} lattice needs {n_axes} axis lengths, got {dims}")
    bc = _normalize_bc(bc, n_axes)
    for length, letter in zip(dims, bc):
        if letter == OPEN and length < 2:
            raise DimensionTooSmallError(f"open axis needs length >= 2, got {length}")
        if letter != OPEN and length < 3:
            raise DimensionTooSmallError(
                f"{'anti-' if letter == ANTIPERIODIC else ''}periodic axis needs length >= 3, got {length}"
            )
    nn = _bonds_for_steps(dims, bc, _NN_STEPS[kind])
    nnn = _bonds_for_steps(dims, bc, _NNN_STEPS[kind])
    return LatticeGraph(kind=kind, dims=dims, bc=bc, nn_bonds=nn, nnn_bonds=nnn)


def parse_lattice_descriptor(text: str) -> LatticeGraph:
    """Inverse of ``LatticeGraph.descriptor``, e.g. "square_4x4_PP"."""
    parts = text.split("_")
    if len(parts) != 3:
        raise ValidationError(f"malformed lattice descriptor {text!r}")
    kind, dims_part, bc_part = parts
    try:
        dims = [int(d) for d in dims_part.split("x")]
    except ValueError as exc:
        raise ValidationError(f"malformed lattice dims in {text!r}") from exc
    return build_lattice(kind, dims, bc_part)
