"""Shared fixtures and brute-force oracles for the test suite."""

from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import strategies as st

from f2removal.gf2_linalg import Subgroup
from f2removal.sets import SetF2


def span_set(n: int, gens) -> set[int]:
    """Span by closure, no linear algebra."""
    out = {0}
    for g in gens:
        out |= {x ^ g for x in out}
    return out


def random_subgroup(rng: np.random.Generator, n: int, dim: int) -> Subgroup:
    while True:
        H = Subgroup.span(n, [int(v) for v in rng.integers(1, 1 << n, size=dim)])
        if H.dim == dim:
            return H


def random_subgroup_of(rng: np.random.Generator, H: Subgroup, dim: int) -> Subgroup:
    while True:
        gens = [H.element(int(c)) for c in rng.integers(0, H.order, size=dim)]
        Hp = Subgroup.span(H.ambient_n, gens)
        if Hp.dim == dim:
            return Hp


def random_set(rng: np.random.Generator, n: int, p: float) -> SetF2:
    return SetF2(n, rng.random(1 << n) < p)


def direct_wht(values) -> list[int]:
    k = len(values).bit_length() - 1
    return [sum(int(v) * (-1) ** bin(x & eta).count("1") for x, v in enumerate(values))
            for eta in range(1 << k)]


def triple_count(A: SetF2) -> int:
    """Ordered triples summing to zero, by plain enumeration."""
    el = [int(x) for x in A.elements()]
    s = set(el)
    return sum(1 for x, y in itertools.product(el, el) if x ^ y in s)


@st.composite
def subgroups(draw, n: int | None = None, max_n: int = 8):
    if n is None:
        n = draw(st.integers(1, max_n))
    gens = draw(st.lists(st.integers(0, (1 << n) - 1), max_size=n + 1))
    return Subgroup.span(n, gens)


@st.composite
def sets_f2(draw, n: int | None = None, max_n: int = 8):
    if n is None:
        n = draw(st.integers(1, max_n))
    bits = draw(st.lists(st.booleans(), min_size=1 << n, max_size=1 << n))
    return SetF2(n, np.array(bits))


@pytest.fixture
def rng():
    return np.random.default_rng(20261014)
