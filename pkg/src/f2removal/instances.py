"""Seeded input families."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import InvariantError, PreconditionError
from .gf2_linalg import Subgroup, check_dim
from .sets import SetF2
from .triangles import Triangle, count_ordered_fourier

KINDS = (
    "random_density",
    "triangle_free_halfspace",
    "disjoint_triangle_union",
    "subgroup_coset",
    "planted_subgroup_noise",
)


@dataclass(frozen=True)
class GeneratorSpec:
    kind: str
    n: int
    params: dict = field(default_factory=dict)
    seed: int = 0

    def build(self) -> SetF2:
        if self.kind not in KINDS:
            raise PreconditionError(f"unknown generator kind {self.kind!r}")
        p = self.params
        if self.kind == "random_density":
            return gen_random_density(self.n, p["p"], self.seed)
        if self.kind == "triangle_free_halfspace":
            return gen_triangle_free_halfspace(self.n, p.get("coord", 0))
        if self.kind == "disjoint_triangle_union":
            return gen_disjoint_triangle_union(self.n, p["m"], self.seed).set
        if self.kind == "subgroup_coset":
            return gen_subgroup_coset(self.n, p["dim"], self.seed)
        return gen_planted_subgroup_noise(self.n, p["dim"], p.get("flip", 0), self.seed)


def gen_random_density(n: int, p, seed: int) -> SetF2:
    p = Fraction(p)
    if not 0 <= p <= 1:
        raise PreconditionError("p must lie in [0, 1]")
    check_dim(n)
    rng = np.random.default_rng(seed)
    return SetF2(n, rng.random(1 << n) < float(p))


def gen_triangle_free_halfspace(n: int, coordinate_index: int = 0) -> SetF2:
    check_dim(n)
    if not 0 <= coordinate_index < n:
        raise PreconditionError("coordinate index out of range")
    xs = np.arange(1 << n, dtype=np.int64)
    return SetF2(n, (xs >> coordinate_index) & 1 == 1)


@dataclass(frozen=True)
class TriangleUnion:
    set: SetF2
    triangles: tuple[Triangle, ...]
    accidental: int


def gen_disjoint_triangle_union(n: int, m: int, seed: int) -> TriangleUnion:
    """Union of ``m`` element-disjoint triangles avoiding 0.

    ``accidental`` counts the unordered triangles of the union beyond the
    planted ones.
    """
    check_dim(n)
    N = 1 << n
    if m < 0 or 3 * m > N - 1:
        raise PreconditionError(f"cannot place {m} disjoint triangles in F_2^{n}")
    rng = np.random.default_rng(seed)
    used = np.zeros(N, dtype=bool)
    used[0] = True
    tris = []
    budget = 1000 * m
    while len(tris) < m:
        if budget == 0:
            raise PreconditionError("rejection budget exhausted")
        budget -= 1
        x, y = (int(v) for v in rng.integers(1, N, size=2))
        z = x ^ y
        if x == y or used[x] or used[y] or used[z]:
            continue
        used[[x, y, z]] = True
        tris.append(Triangle.of(x, y, z))
    used[0] = False
    A = SetF2(n, used)
    extra, rem = divmod(count_ordered_fourier(A) - 6 * m, 6)
    if rem:
        raise InvariantError("triangle count of the union is not 6m plus a multiple of 6")
    return TriangleUnion(A, tuple(sorted(tris)), extra)


def random_subgroup(n: int, dim: int, rng: np.random.Generator) -> Subgroup:
    if not 0 <= dim <= n:
        raise PreconditionError("subgroup dimension out of range")
    gens: list[int] = []
    H = Subgroup.trivial(n)
    while H.dim < dim:
        gens.append(int(rng.integers(1, 1 << n)))
        H = Subgroup.span(n, gens)
    return H


def gen_subgroup_coset(n: int, dim: int, seed: int) -> SetF2:
    """A random coset of a random subgroup of dimension ``dim``; avoids 0 unless ``dim == n``."""
    check_dim(n)
    rng = np.random.default_rng(seed)
    H = random_subgroup(n, dim, rng)
    g = 0
    while dim < n and g in H:
        g = int(rng.integers(1, 1 << n))
    return SetF2.from_elements(n, H.elements() ^ g)


def gen_planted_subgroup_noise(n: int, subgroup_dim: int, flip_p, seed: int) -> SetF2:
    flip_p = Fraction(flip_p)
    check_dim(n)
    if not 0 <= flip_p <= Fraction(1, 2):
        raise PreconditionError("flip probability must lie in [0, 1/2]")
    rng = np.random.default_rng(seed)
    H = random_subgroup(n, subgroup_dim, rng)
    bitmap = np.zeros(1 << n, dtype=bool)
    bitmap[H.elements()] = True
    bitmap ^= rng.random(1 << n) < float(flip_p)
    return SetF2(n, bitmap)
