from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

from f2removal.errors import PreconditionError
from f2removal.instances import (GeneratorSpec, gen_disjoint_triangle_union, gen_planted_subgroup_noise,
                                 gen_random_density, gen_subgroup_coset, gen_triangle_free_halfspace)
from f2removal.gf2_linalg import Coset
from f2removal.regularity import superregular_decomposition
from f2removal.sets import SetF2
from f2removal.triangles import (count_ordered_bruteforce, count_ordered_fourier, degenerate_count,
                                 farness_bounds, greedy_max_packing)
from f2removal.gf2_linalg import Subgroup


def test_random_density_extremes():
    assert len(gen_random_density(8, 0, 1)) == 0
    assert gen_random_density(8, 1, 1) == SetF2.full(8)
    with pytest.raises(PreconditionError):
        gen_random_density(8, Fraction(3, 2), 1)


def test_random_density_triangle_moment():
    A = gen_random_density(12, Fraction(1, 2), 11)
    N = 4096
    c = count_ordered_fourier(A)
    p = 1 / 2
    # c = 6 S + degenerate terms, S the number of 3-element triangles (about
    # N^2 / 6 of them); two triangles share at most one element and about
    # N^3 / 4 ordered pairs of triangles share exactly one
    mean = 6 * (N - 1) * (N - 2) / 6 * p ** 3 + p * (3 * (p * N - 1) + 1)
    var_s = (N * N / 6) * p ** 3 * (1 - p ** 3) + (N ** 3 / 4) * (p ** 5 - p ** 6)
    sd = 6 * var_s ** 0.5 + 3 * N ** 0.5
    assert abs(c - mean) < 5 * sd


def test_halfspace():
    for n in (1, 4, 9):
        for coord in range(n):
            A = gen_triangle_free_halfspace(n, coord)
            assert len(A) == 2 ** (n - 1)
            assert count_ordered_fourier(A) == 0
            fb = farness_bounds(A, greedy_max_packing(A))
            assert (fb.lower, fb.upper) == (0, 0)
    with pytest.raises(PreconditionError):
        gen_triangle_free_halfspace(5, 5)


def test_disjoint_triangle_union():
    assert len(gen_disjoint_triangle_union(6, 0, 1).set) == 0
    one = gen_disjoint_triangle_union(6, 1, 1)
    assert count_ordered_bruteforce(one.set) == 6 and one.accidental == 0
    for seed in range(15):
        tu = gen_disjoint_triangle_union(8, 20, seed)
        assert 0 not in tu.set and len(tu.set) == 60
        elems = [e for t in tu.triangles for e in t]
        assert len(set(elems)) == 60 and all(t.x ^ t.y == t.z for t in tu.triangles)
        assert tu.accidental == (count_ordered_fourier(tu.set) - 6 * 20 - degenerate_count(tu.set)) // 6
    with pytest.raises(PreconditionError):
        gen_disjoint_triangle_union(4, 6, 0)


def test_subgroup_coset_avoids_zero():
    for seed in range(10):
        A = gen_subgroup_coset(7, 4, seed)
        assert len(A) == 16 and 0 not in A
        assert count_ordered_fourier(A) == 0
    assert gen_subgroup_coset(5, 5, 0) == SetF2.full(5)


def test_planted_subgroup():
    A = gen_planted_subgroup_noise(9, 5, 0, 3)
    assert len(A) == 32 and count_ordered_fourier(A) == 32 ** 2
    assert gen_planted_subgroup_noise(6, 6, 0, 2) == SetF2.full(6)
    with pytest.raises(PreconditionError):
        gen_planted_subgroup_noise(6, 3, Fraction(3, 4), 2)
    with pytest.raises(PreconditionError):
        gen_planted_subgroup_noise(6, 7, 0, 2)


def test_planted_noise_dominant_part():
    # the part carrying most of the set sits on a subgroup of dimension >= dim - 4
    n, dim, hits, seeds = 12, 8, 0, range(20)
    G = Subgroup.full(n)
    for seed in seeds:
        A = gen_planted_subgroup_noise(n, dim, Fraction(1, 20), seed)
        dec = superregular_decomposition(A, G, 0, Fraction(1, 4), Fraction(1, 20))
        big = max(dec.parts, key=lambda p: len(p.part))
        hits += big.subgroup.dim >= dim - 4
    assert hits >= 0.9 * len(seeds)


def test_spec_determinism():
    specs = [GeneratorSpec("random_density", 9, {"p": Fraction(1, 3)}, 4),
             GeneratorSpec("triangle_free_halfspace", 9, {"coord": 2}),
             GeneratorSpec("disjoint_triangle_union", 9, {"m": 30}, 4),
             GeneratorSpec("subgroup_coset", 9, {"dim": 5}, 4),
             GeneratorSpec("planted_subgroup_noise", 9, {"dim": 5, "flip": Fraction(1, 10)}, 4)]
    for s in specs:
        assert s.build() == s.build()
    assert GeneratorSpec("random_density", 9, {"p": Fraction(1, 3)}, 5).build() != specs[0].build()
    with pytest.raises(PreconditionError):
        GeneratorSpec("behrend", 9).build()
