"""Linear algebra over GF(2) with vectors packed into Python ints.

Bit ``i`` of an int is coordinate ``i``.  A subgroup of F_2^n is stored by a
reduced row echelon basis whose pivot is the highest set bit of each row,
rows sorted by decreasing pivot, and every pivot bit cleared from the other
rows.  The basis is canonical, and reducing a vector against it returns the
smallest element of its coset.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import PreconditionError

MAX_DIM = 30


def check_dim(n: int) -> None:
    if not 1 <= n <= MAX_DIM:
        raise PreconditionError(f"ambient dimension must be in [1, {MAX_DIM}], got {n}")


def check_element(x: int, n: int) -> None:
    if not 0 <= x < (1 << n):
        raise PreconditionError(f"element {x:#x} does not lie in F_2^{n}")


def parity(arr: np.ndarray) -> np.ndarray:
    """Bit parity of every entry of a non-negative integer array."""
    return (np.bitwise_count(arr) & 1).astype(np.int64)


def span_table(gens: Sequence[int]) -> np.ndarray:
    """All XOR combinations of ``gens``; entry ``c`` combines the gens set in ``c``."""
    out = np.zeros(1 << len(gens), dtype=np.int64)
    size = 1
    for v in gens:
        out[size:2 * size] = out[:size] ^ v
        size *= 2
    return out


def _echelon(vectors: Iterable[int]) -> tuple[int, ...]:
    rows: list[tuple[int, int]] = []
    for v in vectors:
        for p, r in rows:
            if v >> p & 1:
                v ^= r
        if not v:
            continue
        p = v.bit_length() - 1
        rows = [(q, r ^ v) if r >> p & 1 else (q, r) for q, r in rows]
        rows.append((p, v))
    rows.sort(reverse=True)
    return tuple(r for _, r in rows)


def kernel_combinations(vectors: Sequence[int]) -> list[int]:
    """Basis of ``{c : XOR of vectors[i] for bits i of c == 0}``."""
    pivots: dict[int, tuple[int, int]] = {}
    kernel = []
    for i, v in enumerate(vectors):
        mask = 1 << i
        while v:
            p = v.bit_length() - 1
            if p not in pivots:
                pivots[p] = (v, mask)
                break
            r, m = pivots[p]
            v ^= r
            mask ^= m
        else:
            kernel.append(mask)
    return kernel


@dataclass(frozen=True)
class Subgroup:
    ambient_n: int
    basis: tuple[int, ...]

    @classmethod
    def span(cls, ambient_n: int, gens: Iterable[int] = ()) -> Subgroup:
        check_dim(ambient_n)
        gens = [int(g) for g in gens]
        for g in gens:
            check_element(g, ambient_n)
        return cls(ambient_n, _echelon(gens))

    @classmethod
    def trivial(cls, ambient_n: int) -> Subgroup:
        return cls.span(ambient_n)

    @classmethod
    def full(cls, ambient_n: int) -> Subgroup:
        return cls.span(ambient_n, [1 << i for i in range(ambient_n)])

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def order(self) -> int:
        return 1 << len(self.basis)

    @cached_property
    def pivots(self) -> tuple[int, ...]:
        return tuple(r.bit_length() - 1 for r in self.basis)

    def reduce(self, x: int) -> int:
        """Smallest element of the coset ``self + x``."""
        for p, r in zip(self.pivots, self.basis):
            if x >> p & 1:
                x ^= r
        return x

    def reduce_array(self, xs: np.ndarray) -> np.ndarray:
        xs = np.array(xs, dtype=np.int64, copy=True)
        for p, r in zip(self.pivots, self.basis):
            xs ^= ((xs >> p) & 1) * r
        return xs

    def __contains__(self, x: int) -> bool:
        return self.reduce(int(x)) == 0

    def coords(self, x: int) -> int:
        """Coefficient vector of ``x`` in the basis, packed as an int."""
        if self.reduce(x) != 0:
            raise PreconditionError(f"{x:#x} is not in the subgroup")
        c = 0
        for i, p in enumerate(self.pivots):
            c |= (x >> p & 1) << i
        return c

    def coords_array(self, xs: np.ndarray) -> np.ndarray:
        """Vectorised ``coords``; members only, not checked."""
        xs = np.asarray(xs, dtype=np.int64)
        out = np.zeros(xs.shape, dtype=np.int64)
        for i, p in enumerate(self.pivots):
            out |= ((xs >> p) & 1) << i
        return out

    def element(self, coeffs: int) -> int:
        x = 0
        for i, r in enumerate(self.basis):
            if coeffs >> i & 1:
                x ^= r
        return x

    def elements(self) -> np.ndarray:
        """All elements, entry ``c`` being the element with coordinates ``c``."""
        return self._elements

    @cached_property
    def _elements(self) -> np.ndarray:
        out = span_table(self.basis)
        out.flags.writeable = False
        return out

    def is_subgroup_of(self, other: Subgroup) -> bool:
        return self.ambient_n == other.ambient_n and all(b in other for b in self.basis)

    def kernel(self, eta: int) -> Subgroup:
        """Elements of ``self`` on which the character with coefficients ``eta`` is +1."""
        if eta == 0:
            return self
        t = (eta & -eta).bit_length() - 1
        lead = self.basis[t]
        gens = [b ^ lead if eta >> i & 1 else b for i, b in enumerate(self.basis) if i != t]
        return Subgroup.span(self.ambient_n, gens)

    def __repr__(self) -> str:
        rows = ", ".join(f"{b:0{self.ambient_n}b}" for b in self.basis)
        return f"Subgroup(n={self.ambient_n}, dim={self.dim}, basis=[{rows}])"


def subgroup_from_generators(ambient_n: int, gens: Iterable[int]) -> Subgroup:
    return Subgroup.span(ambient_n, gens)


def coords(x: int, H: Subgroup) -> int:
    return H.coords(x)


def _same_ambient(H1: Subgroup, H2: Subgroup) -> None:
    if H1.ambient_n != H2.ambient_n:
        raise PreconditionError(
            f"ambient dimensions differ: {H1.ambient_n} vs {H2.ambient_n}")


def _require_sub(Hp: Subgroup, H: Subgroup) -> None:
    _same_ambient(Hp, H)
    if not Hp.is_subgroup_of(H):
        raise PreconditionError("first subgroup is not contained in the second")


def intersect(H1: Subgroup, H2: Subgroup) -> Subgroup:
    _same_ambient(H1, H2)
    residues = [H2.reduce(b) for b in H1.basis]
    return Subgroup.span(H1.ambient_n, [H1.element(c) for c in kernel_combinations(residues)])


@dataclass(frozen=True)
class Coset:
    subgroup: Subgroup
    rep: int

    @classmethod
    def of(cls, subgroup: Subgroup, g: int) -> Coset:
        check_element(g, subgroup.ambient_n)
        return cls(subgroup, subgroup.reduce(int(g)))

    def __contains__(self, x: int) -> bool:
        return self.subgroup.reduce(int(x)) == self.rep

    def elements(self) -> np.ndarray:
        return self.subgroup.elements() ^ self.rep


@dataclass(frozen=True)
class DualCharacter:
    """Character of ``subgroup``: ``x -> (-1)^<coords(x), coeffs>``."""

    subgroup: Subgroup
    coeffs: int

    @property
    def is_trivial(self) -> bool:
        return self.coeffs == 0

    def __call__(self, x: int) -> int:
        return -1 if (self.subgroup.coords(x) & self.coeffs).bit_count() & 1 else 1

    def values(self) -> np.ndarray:
        """Values on ``subgroup.elements()``, in coordinate order."""
        idx = np.arange(self.subgroup.order, dtype=np.int64)
        return 1 - 2 * parity(idx & self.coeffs)


def restriction_columns(Hp: Subgroup, H: Subgroup) -> list[int]:
    """Images of the unit characters of ``H`` under restriction to ``Hp``.

    Entry ``i`` has bit ``j`` set iff basis vector ``j`` of ``Hp`` has
    coordinate ``i`` set in ``H``.
    """
    hp_coords = [H.coords(b) for b in Hp.basis]
    return [sum((c >> i & 1) << j for j, c in enumerate(hp_coords)) for i in range(H.dim)]


def annihilator_basis(Hp: Subgroup, H: Subgroup) -> list[int]:
    _require_sub(Hp, H)
    return kernel_combinations(restriction_columns(Hp, H))


def annihilator_within(Hp: Subgroup, H: Subgroup) -> list[DualCharacter]:
    """Characters of ``H`` that are trivial on ``Hp``, sorted by coefficients."""
    basis = annihilator_basis(Hp, H)
    return [DualCharacter(H, int(c)) for c in np.sort(span_table(basis))]


class Quotient:
    """The cosets of ``Hp`` inside ``H``, indexed by ``0 .. index - 1``.

    Index ``j`` names the coset whose canonical representative is
    ``reps[j]``; ``of_elements[c]`` is the index of the coset containing the
    element of ``H`` with coordinates ``c``.
    """

    def __init__(self, Hp: Subgroup, H: Subgroup):
        _require_sub(Hp, H)
        self.Hp = Hp
        self.H = H
        self.complement = Subgroup.span(H.ambient_n, [Hp.reduce(b) for b in H.basis])
        self.index = self.complement.order
        self.reps = self.complement.elements()

    def index_of(self, xs: np.ndarray) -> np.ndarray:
        return self.complement.coords_array(self.Hp.reduce_array(xs))

    @cached_property
    def of_elements(self) -> np.ndarray:
        images = [self.complement.coords(self.Hp.reduce(b)) for b in self.H.basis]
        return span_table(images)


def coset_representatives(Hp: Subgroup, H: Subgroup) -> list[int]:
    return sorted(int(r) for r in Quotient(Hp, H).reps)
