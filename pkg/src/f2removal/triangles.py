"""Triangle counting, disjoint triangle packings and farness bounds.

Counts are over ordered triples summing to zero and include the degenerate
triples ``(x, x, 0)`` and ``(0, 0, 0)``.  Packings use triangles with three
distinct elements; such a triangle never contains 0, so ``0 in A`` is tracked
separately as one extra forced deletion.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import InvariantError, PreconditionError
from .fourier import character_signs, shifted_spectrum, shifted_values, wht_in_place
from .gf2_linalg import Subgroup, restriction_columns, span_table
from .sets import SetF2


@dataclass(frozen=True, order=True)
class Triangle:
    x: int
    y: int
    z: int

    @classmethod
    def of(cls, a: int, b: int, c: int) -> Triangle:
        if a ^ b ^ c:
            raise PreconditionError(f"{a:#x} + {b:#x} + {c:#x} != 0")
        return cls(*sorted((int(a), int(b), int(c))))

    def __iter__(self):
        return iter((self.x, self.y, self.z))


@dataclass(frozen=True)
class Packing:
    triangles: tuple[Triangle, ...]
    contains_zero: bool

    @property
    def size(self) -> int:
        return len(self.triangles)

    def support(self) -> list[int]:
        return [e for t in self.triangles for e in t]


@dataclass(frozen=True)
class FarnessBounds:
    lower: Fraction
    upper: Fraction
    packing_size: int


def count_ordered_bruteforce(A: SetF2) -> int:
    """Ordered pairs ``(x, y)`` in ``A^2`` with ``x + y`` in ``A``."""
    elems = A.elements()
    total = 0
    for x in elems:
        total += int(np.count_nonzero(A.bitmap[elems ^ x]))
    return total


def _cube_sum(raw: np.ndarray, n: int) -> int:
    if n <= 20:
        # sum |raw|^3 <= max|raw| * sum raw^2 <= N^3 <= 2^60
        return int(np.sum(raw * raw * raw))
    total = 0
    for start in range(0, raw.size, 1 << 16):
        chunk = raw[start:start + (1 << 16)].astype(object)
        total += int(np.sum(chunk * chunk * chunk))
    return total


def count_ordered_fourier(A: SetF2) -> int:
    raw = wht_in_place(A.indicator())
    total = _cube_sum(raw, A.n)
    count, rem = divmod(total, A.size)
    if rem:
        raise InvariantError("cubed spectrum is not divisible by N")
    return count


def degenerate_count(A: SetF2) -> int:
    """Ordered triangles with a repeated element: ``3(|A| - 1) + 1`` when ``0 in A``."""
    return 3 * (len(A) - 1) + 1 if 0 in A else 0


def distinct_triangle_count(A: SetF2, ordered: int | None = None) -> int:
    """Unordered triangles with three distinct elements."""
    if ordered is None:
        ordered = count_ordered_fourier(A)
    q, r = divmod(ordered - degenerate_count(A), 6)
    if r:
        raise InvariantError("ordered count is inconsistent with the degeneracy ledger")
    return q


def _check_cosets(A, B, C, Hp, H, g1, g2, g3, z1):
    for S in (B, C):
        if S.n != A.n:
            raise PreconditionError("sets live in different ambient groups")
    if H.ambient_n != A.n or not Hp.is_subgroup_of(H):
        raise PreconditionError("need Hp <= H <= F_2^n")
    if g1 ^ g2 ^ g3:
        raise PreconditionError("g1 + g2 + g3 != 0")
    if z1 not in H:
        raise PreconditionError("z1 is not in H")


def _three_coset_terms(A, B, C, Hp, H, g1, g2, g3, z1) -> tuple[int, int]:
    """Diagonal (``alpha = 0``) and full raw double sums of the counting identity.

    The count equals ``full / |H|``.
    """
    ra = shifted_spectrum(A, Hp, g1 ^ z1).raw
    rb = shifted_spectrum(B, H, g2).raw
    rc = shifted_spectrum(C, H, g3).raw
    # restriction of every character of H to Hp
    res = span_table(restriction_columns(Hp, H))
    ann = np.flatnonzero(res == 0)
    lift = span_table([int(np.argmax(res == 1 << j)) for j in range(Hp.dim)])
    beta = lift[:, None] ^ ann[None, :]
    wide = 2 * H.dim + Hp.dim + H.dim > 62
    bc = rb * rc * character_signs(H, z1)
    if wide:
        bc = bc.astype(object)
    terms = ra.astype(object if wide else np.int64)[:, None] * bc[beta]
    return int(np.sum(terms[0])), int(np.sum(terms))


def count_three_cosets(A: SetF2, B: SetF2, C: SetF2, Hp: Subgroup, H: Subgroup,
                       g1: int, g2: int, g3: int, z1: int) -> int:
    """Triples ``(a, b, c)`` summing to 0 with ``a`` in ``A ∩ (Hp+g1+z1)``,
    ``b`` in ``B ∩ (H+g2)`` and ``c`` in ``C ∩ (H+g3)``, via the double
    Fourier sum over ``alpha`` in the dual of ``Hp`` and ``eta`` in its
    annihilator."""
    _check_cosets(A, B, C, Hp, H, g1, g2, g3, z1)
    _, full = _three_coset_terms(A, B, C, Hp, H, g1, g2, g3, z1)
    count, rem = divmod(full, H.order)
    if rem:
        raise InvariantError("three-coset Fourier sum is not divisible by |H|")
    return count


def count_three_cosets_direct(A: SetF2, B: SetF2, C: SetF2, Hp: Subgroup, H: Subgroup,
                              g1: int, g2: int, g3: int, z1: int) -> int:
    """Double loop over ``x1`` in ``Hp`` and ``x2`` in ``H``."""
    _check_cosets(A, B, C, Hp, H, g1, g2, g3, z1)
    a = shifted_values(A, Hp, g1 ^ z1).astype(bool)
    b = shifted_values(B, H, g2).astype(bool)
    hb = H.elements()[b]
    total = 0
    for x1 in Hp.elements()[a]:
        total += int(np.count_nonzero(C.bitmap[x1 ^ hb ^ z1 ^ g3]))
    return total


def iter_distinct_triangles(A: SetF2):
    """Unordered triangles ``x < y < z`` of ``A``."""
    elems = A.elements()
    for i, x in enumerate(elems):
        ys = elems[i + 1:]
        zs = ys ^ x
        ok = (zs > ys) & A.bitmap[zs]
        for y, z in zip(ys[ok], zs[ok]):
            yield Triangle(int(x), int(y), int(z))


def greedy_max_packing(A: SetF2, seed: int | None = 0) -> Packing:
    """Maximal family of element-disjoint triangles.

    Elements are visited in a seeded random order; each still-unused ``x``
    is matched with the first unused ``y`` in that order for which ``x + y``
    is an unused member of ``A``.
    """
    rng = np.random.default_rng(seed)
    order = rng.permutation(A.elements())
    free = A.bitmap.copy()
    free[0] = False
    chosen = []
    for x in order:
        if not free[x]:
            continue
        zs = order ^ x
        ok = free[order] & free[zs] & (order != x)
        hit = np.flatnonzero(ok)
        if hit.size:
            y = order[hit[0]]
            z = y ^ x
            free[[x, y, z]] = False
            chosen.append(Triangle.of(x, y, z))
    chosen.sort()
    return Packing(tuple(chosen), 0 in A)


def validate_packing(A: SetF2, packing: Packing) -> None:
    support = packing.support()
    if len(set(support)) != len(support):
        raise PreconditionError("packed triangles share an element")
    for t in packing.triangles:
        if t.x ^ t.y ^ t.z or len({t.x, t.y, t.z}) != 3:
            raise PreconditionError(f"{t} is not a distinct-element triangle")
        if not all(e in A for e in t):
            raise PreconditionError(f"{t} is not contained in the set")
    if packing.contains_zero != (0 in A):
        raise PreconditionError("zero flag does not match the set")


def is_maximal(A: SetF2, packing: Packing) -> bool:
    used = SetF2.from_elements(A.n, packing.support() + [0])
    return next(iter_distinct_triangles(A - used), None) is None


def farness_bounds(A: SetF2, packing: Packing) -> FarnessBounds:
    validate_packing(A, packing)
    if not is_maximal(A, packing):
        raise PreconditionError("packing is not maximal")
    m = packing.size
    return FarnessBounds(Fraction(m, A.size), Fraction(3 * m + packing.contains_zero, A.size), m)


def _hits_all(tris: list[frozenset], budget: int) -> bool:
    if not tris:
        return True
    if budget == 0:
        return False
    return any(_hits_all([t for t in tris if e not in t], budget - 1) for e in tris[0])


def exact_farness_small(A: SetF2) -> Fraction:
    """Minimum deletions leaving ``A`` triangle-free, over N; exhaustive."""
    if len(A) > 20:
        raise PreconditionError("exact farness is limited to |A| <= 20")
    tris = [frozenset(t) for t in iter_distinct_triangles(A)]
    k = 0
    while not _hits_all(tris, k):
        k += 1
    return Fraction(k + (0 in A), A.size)


def sample_tester(A: SetF2, trials: int, seed: int | None = 0) -> Fraction:
    """Fraction of uniform ``(x, y)`` with ``x``, ``y``, ``x + y`` all in ``A``."""
    if trials < 1:
        raise PreconditionError("trials must be positive")
    rng = np.random.default_rng(seed)
    hits = 0
    done = 0
    while done < trials:
        k = min(1 << 20, trials - done)
        x = rng.integers(0, A.size, size=k)
        y = rng.integers(0, A.size, size=k)
        hits += int(np.count_nonzero(A.bitmap[x] & A.bitmap[y] & A.bitmap[x ^ y]))
        done += k
    return Fraction(hits, trials)
