from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_set, random_subgroup, random_subgroup_of, sets_f2, triple_count
from f2removal.errors import PreconditionError
from f2removal.gf2_linalg import Subgroup
from f2removal.instances import gen_disjoint_triangle_union, gen_triangle_free_halfspace
from f2removal.sets import SetF2
from f2removal.triangles import (Packing, Triangle, count_ordered_bruteforce, count_ordered_fourier,
                                 count_three_cosets, count_three_cosets_direct, degenerate_count,
                                 distinct_triangle_count, exact_farness_small, farness_bounds,
                                 greedy_max_packing, is_maximal, iter_distinct_triangles,
                                 sample_tester, validate_packing)


def test_count_examples():
    for count in (count_ordered_bruteforce, count_ordered_fourier):
        assert count(SetF2.empty(4)) == 0
        assert count(SetF2.full(5)) == 4 ** 5
        assert count(SetF2.from_elements(3, [0b001, 0b010, 0b011])) == 6


def test_subgroup_count_is_order_squared(rng):
    for _ in range(10):
        H = random_subgroup(rng, 9, int(rng.integers(0, 10)))
        A = SetF2.from_elements(9, H.elements())
        assert count_ordered_fourier(A) == H.order ** 2


@settings(max_examples=120, deadline=None)
@given(sets_f2(max_n=7))
def test_counters_agree_with_enumeration(A):
    c = triple_count(A)
    assert count_ordered_bruteforce(A) == c
    assert count_ordered_fourier(A) == c


@settings(max_examples=80, deadline=None)
@given(sets_f2(max_n=6))
def test_degeneracy_ledger(A):
    distinct = sum(1 for x, y, z in itertools.combinations(A.elements().tolist(), 3) if x ^ y ^ z == 0)
    z = int(0 in A)
    assert count_ordered_fourier(A) == 6 * distinct + 3 * (len(A) - 1) * z + z
    assert distinct_triangle_count(A) == distinct
    assert degenerate_count(A) == (3 * (len(A) - 1) + 1) * z


def test_fourier_count_beyond_int64_path(rng):
    # n > 20 takes the chunked big-integer route; a subgroup gives a known answer
    H = random_subgroup(rng, 21, 11)
    A = SetF2.from_elements(21, H.elements())
    assert count_ordered_fourier(A) == H.order ** 2


def test_three_cosets_full_group():
    n = 5
    G, A = Subgroup.full(n), SetF2.full(n)
    assert count_three_cosets(A, A, A, G, G, 0, 0, 0, 0) == 4 ** n


def test_three_cosets_empty_argument(rng):
    n = 7
    H = random_subgroup(rng, n, 5)
    Hp = random_subgroup_of(rng, H, 3)
    A = random_set(rng, n, 0.5)
    g1, g2 = 0b0001101, 0b1100000
    assert count_three_cosets(SetF2.empty(n), A, A, Hp, H, g1, g2, g1 ^ g2, 0) == 0
    assert count_three_cosets(A, A, SetF2.empty(n), Hp, H, g1, g2, g1 ^ g2, 0) == 0


def _triple_oracle(A, B, C, Hp, H, g1, g2, g3, z1) -> int:
    first = {int(x) ^ g1 ^ z1 for x in Hp.elements()}
    second = {int(x) ^ g2 for x in H.elements()}
    third = {int(x) ^ g3 for x in H.elements()}
    return sum(1 for a in first if a in A for b in second if b in B
               if (a ^ b) in third and (a ^ b) in C)


def test_three_cosets_against_oracles(rng):
    for _ in range(40):
        n = int(rng.integers(3, 9))
        H = random_subgroup(rng, n, int(rng.integers(0, min(n, 5) + 1)))
        Hp = random_subgroup_of(rng, H, int(rng.integers(0, H.dim + 1)))
        A, B, C = (random_set(rng, n, p) for p in (0.3, 0.5, 0.7))
        g1, g2 = (int(v) for v in rng.integers(0, 1 << n, size=2))
        z1 = H.element(int(rng.integers(0, H.order)))
        args = (A, B, C, Hp, H, g1, g2, g1 ^ g2, z1)
        expect = _triple_oracle(*args)
        assert count_three_cosets(*args) == expect
        assert count_three_cosets_direct(*args) == expect


def test_three_cosets_preconditions(rng):
    n = 5
    H = random_subgroup(rng, n, 3)
    A = SetF2.full(n)
    with pytest.raises(PreconditionError):
        count_three_cosets(A, A, A, H, H, 1, 2, 4, 0)
    with pytest.raises(PreconditionError):
        count_three_cosets(A, A, A, Subgroup.full(n), H, 0, 0, 0, 0)
    outside = next(x for x in range(1 << n) if x not in H)
    with pytest.raises(PreconditionError):
        count_three_cosets(A, A, A, H, H, 0, 0, 0, outside)


def test_packing_examples():
    half = gen_triangle_free_halfspace(6, 0)
    assert greedy_max_packing(half, 1).size == 0
    one = SetF2.from_elements(5, [3, 5, 6])
    p = greedy_max_packing(one, 2)
    assert p.triangles == (Triangle(3, 5, 6),)
    assert farness_bounds(one, p) == (fb := farness_bounds(one, p))
    assert (fb.lower, fb.upper) == (Fraction(1, 32), Fraction(3, 32))


def test_one_triangle_farness_n3():
    A = SetF2.from_elements(3, [1, 2, 3])
    fb = farness_bounds(A, greedy_max_packing(A))
    assert (fb.lower, fb.upper) == (Fraction(1, 8), Fraction(3, 8))
    fb0 = farness_bounds(gen_triangle_free_halfspace(3, 1), greedy_max_packing(gen_triangle_free_halfspace(3, 1)))
    assert (fb0.lower, fb0.upper) == (0, 0)


@settings(max_examples=100, deadline=None)
@given(sets_f2(max_n=7), st.integers(0, 2 ** 32))
def test_greedy_packing_is_valid_and_maximal(A, seed):
    p = greedy_max_packing(A, seed)
    validate_packing(A, p)
    used = set(p.support()) | {0}
    leftover = [x for x in A.elements().tolist() if x not in used]
    left = set(leftover)
    assert not any(x ^ y in left for x, y in itertools.combinations(leftover, 2))
    assert is_maximal(A, p)
    assert list(p.triangles) == sorted(p.triangles)
    assert greedy_max_packing(A, seed) == p


def test_packing_recovers_planted_triangles():
    for seed in range(20):
        tu = gen_disjoint_triangle_union(9, 15, seed)
        p = greedy_max_packing(tu.set, seed)
        assert 3 * p.size >= 15
        if tu.accidental == 0:
            assert p.size == 15


def test_invalid_packings_rejected():
    A = SetF2.from_elements(4, [1, 2, 3, 4, 5, 6, 7])
    with pytest.raises(PreconditionError):
        farness_bounds(A, Packing((Triangle(1, 2, 3), Triangle(1, 4, 5)), False))
    B = SetF2.from_elements(4, [1, 2, 3, 4, 8, 12])
    with pytest.raises(PreconditionError):
        farness_bounds(B, Packing((Triangle(1, 2, 3),), False))  # {4, 8, 12} is left untouched
    with pytest.raises(PreconditionError):
        farness_bounds(B, Packing((Triangle(1, 2, 3), Triangle(4, 8, 12)), True))
    with pytest.raises(PreconditionError):
        farness_bounds(A, Packing((Triangle(8, 1, 9),), False))
    with pytest.raises(PreconditionError):
        Triangle.of(1, 2, 4)


def _exact_farness_oracle(A: SetF2) -> Fraction:
    elems = A.elements().tolist()
    for k in range(len(elems) + 1):
        for victims in itertools.combinations(elems, k):
            if triple_count(A - SetF2.from_elements(A.n, victims)) == 0:
                return Fraction(k, A.size)
    raise AssertionError


def test_exact_farness_examples():
    assert exact_farness_small(gen_triangle_free_halfspace(4, 2)) == 0
    assert exact_farness_small(SetF2.from_elements(4, [1, 2, 3])) == Fraction(1, 16)
    # two triangles sharing the element 1
    assert exact_farness_small(SetF2.from_elements(4, [1, 2, 3, 4, 5])) == Fraction(1, 16)
    with pytest.raises(PreconditionError):
        exact_farness_small(SetF2.full(5))


def test_exact_farness_matches_subset_search(rng):
    for _ in range(25):
        A = SetF2(4, rng.random(16) < 0.5)
        if len(A) > 11:
            continue
        assert exact_farness_small(A) == _exact_farness_oracle(A)


def test_sample_tester():
    assert sample_tester(gen_triangle_free_halfspace(8, 3), 10000, 1) == 0
    assert sample_tester(SetF2.full(6), 1000, 1) == 1
    H = Subgroup.span(10, [1 << i for i in range(8)])
    est = sample_tester(SetF2.from_elements(10, H.elements()), 200000, 5)
    p = 1 / 16
    se = (p * (1 - p) / 200000) ** 0.5
    assert abs(float(est) - p) < 3 * se
    with pytest.raises(PreconditionError):
        sample_tester(SetF2.full(3), 0)


def test_iter_distinct_triangles_sorted(rng):
    A = random_set(rng, 6, 0.5)
    tris = list(iter_distinct_triangles(A))
    assert all(t.x < t.y < t.z and t.x ^ t.y == t.z for t in tris)
    assert len(tris) == distinct_triangle_count(A)
