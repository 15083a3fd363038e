from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import direct_wht, random_set, random_subgroup, random_subgroup_of, sets_f2
from f2removal.errors import PreconditionError
from f2removal.fourier import (annihilator_correlation, averaged_correlation, averaged_density,
                               coset_spectrum, shifted_spectrum, subcoset_counts, wht_in_place)
from f2removal.gf2_linalg import Coset, DualCharacter, Subgroup, annihilator_within
from f2removal.sets import SetF2


def test_wht_examples():
    assert wht_in_place(np.ones(8, dtype=np.int64)).tolist() == [8, 0, 0, 0, 0, 0, 0, 0]
    delta = np.zeros(8, dtype=np.int64)
    delta[0] = 1
    assert wht_in_place(delta).tolist() == [1] * 8
    ind = np.zeros(8, dtype=np.int64)
    ind[[0b000, 0b001]] = 1
    out = wht_in_place(ind)
    assert out.tolist() == [2 if eta in (0, 2, 4, 6) else 0 for eta in range(8)]


def test_wht_rejects_bad_length():
    with pytest.raises(PreconditionError):
        wht_in_place(np.ones(6, dtype=np.int64))


def test_wht_in_place_and_copy_semantics():
    a = np.arange(16, dtype=np.int64)
    out = wht_in_place(a)
    assert out is a
    b = [1, 2, 3, 4]
    assert wht_in_place(b).tolist() == direct_wht(b)
    assert b == [1, 2, 3, 4]


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 7).flatmap(lambda k: st.lists(st.integers(-50, 50), min_size=1 << k, max_size=1 << k)))
def test_wht_matches_direct_sum_and_is_involutive(vals):
    out = wht_in_place(np.array(vals, dtype=np.int64))
    assert out.tolist() == direct_wht(vals)
    assert (wht_in_place(out.copy()) == len(vals) * np.array(vals)).all()


def _spectrum_oracle(A: SetF2, H: Subgroup, g: int) -> list[int]:
    return [sum(int(A.bitmap[int(x) ^ g]) * DualCharacter(H, eta)(int(x)) for x in H.elements())
            for eta in range(H.order)]


def test_coset_spectrum_matches_definition(rng):
    for _ in range(20):
        n = int(rng.integers(3, 9))
        H = random_subgroup(rng, n, int(rng.integers(0, n + 1)))
        A = random_set(rng, n, 0.4)
        g = int(rng.integers(0, 1 << n))
        spec = shifted_spectrum(A, H, g)
        assert spec.raw.tolist() == _spectrum_oracle(A, H, g)
        assert spec.mass == A.count_in(Coset.of(H, g))
        assert int(np.sum(spec.raw ** 2)) == H.order * spec.mass


def test_coset_spectrum_examples(rng):
    n = 7
    H = random_subgroup(rng, n, 5)
    g = 0b1010101 & ~0
    C = Coset.of(H, g)
    full = SetF2.from_elements(n, C.elements())
    spec = coset_spectrum(full, C)
    assert spec.raw[0] == H.order and not spec.raw[1:].any()
    assert not coset_spectrum(SetF2.empty(n), C).raw.any()
    Hp = random_subgroup_of(rng, H, 4)
    sub = SetF2.from_elements(n, Hp.elements() ^ C.rep)
    spec = coset_spectrum(sub, C)
    ann = {a.coeffs for a in annihilator_within(Hp, H)}
    for eta in range(H.order):
        assert abs(int(spec.raw[eta])) == (H.order // 2 if eta in ann else 0)
    assert spec.raw[0] == H.order // 2


def test_coset_spectrum_shift_must_lie_in_coset(rng):
    H = random_subgroup(rng, 5, 2)
    C = Coset.of(H, 3)
    with pytest.raises(PreconditionError):
        coset_spectrum(SetF2.full(5), C, shift=C.rep ^ next(x for x in range(32) if x not in H))


def test_averaged_density_examples(rng):
    n = 8
    H = random_subgroup(rng, n, 6)
    A = random_set(rng, n, 0.5)
    g = 0x35
    single = averaged_density(A, H, H, g)
    assert list(single.values()) == [Fraction(A.count_in(Coset.of(H, g)), H.order)]
    Hp = random_subgroup_of(rng, H, 4)
    assert set(averaged_density(SetF2.full(n), H, Hp, g).values()) == {1}
    one = SetF2.from_elements(n, Hp.elements() ^ g ^ H.basis[0])
    vals = sorted(averaged_density(one, H, Hp, g).values())
    assert vals == [0, 0, 0, 1]


@settings(max_examples=60, deadline=None)
@given(sets_f2(max_n=7), st.data())
def test_averaged_density_mean_and_counts(A, data):
    n = A.n
    H = Subgroup.span(n, data.draw(st.lists(st.integers(0, (1 << n) - 1), max_size=n)))
    Hp = Subgroup.span(n, [H.element(c) for c in data.draw(st.lists(st.integers(0, H.order - 1), max_size=H.dim))])
    g = data.draw(st.integers(0, (1 << n) - 1))
    dens = averaged_density(A, H, Hp, g)
    assert sum(dens.values()) / len(dens) == Fraction(A.count_in(Coset.of(H, g)), H.order)
    for v, d in dens.items():
        assert d * Hp.order == sum(int(A.bitmap[int(x) ^ g ^ v]) for x in Hp.elements())
    reps, counts = subcoset_counts(A, H, Hp, g)
    assert sorted(reps.tolist()) == list(dens)


def test_fourier_shattering_identity(rng):
    for _ in range(30):
        n = int(rng.integers(3, 10))
        H = random_subgroup(rng, n, int(rng.integers(1, n + 1)))
        Hp = random_subgroup_of(rng, H, int(rng.integers(0, H.dim + 1)))
        A, B = random_set(rng, n, 0.5), random_set(rng, n, 0.3)
        ga, gb = (int(v) for v in rng.integers(0, 1 << n, size=2))
        z = H.element(int(rng.integers(0, H.order)))
        lhs = annihilator_correlation(shifted_spectrum(A, H, ga), shifted_spectrum(B, H, gb), Hp, z)
        rhs = averaged_correlation(A, B, H, Hp, ga, gb, z)
        assert lhs == rhs
        # plain double loop over representatives
        da = averaged_density(A, H, Hp, ga)
        db = averaged_density(B, H, Hp, gb)
        oracle = sum(da[v] * db[Hp.reduce(v ^ z)] for v in da) / len(da)
        assert rhs == oracle
