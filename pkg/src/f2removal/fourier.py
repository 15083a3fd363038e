"""Walsh-Hadamard spectra of set indicators restricted to cosets.

Spectra are kept unnormalised: ``raw[eta]`` is the plain signed sum
``sum_{x in H} f(x + g) * chi_eta(x)`` over subgroup coordinates, so every
identity below is an exact integer or rational identity.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import PreconditionError
from .gf2_linalg import Coset, Quotient, Subgroup, annihilator_basis, parity, span_table
from .sets import SetF2


def wht_in_place(values) -> np.ndarray:
    """Unnormalised Walsh-Hadamard transform.

    A writable int64 array is transformed in place and returned; anything else
    is copied into a fresh int64 array first.
    """
    if isinstance(values, np.ndarray) and values.dtype == np.int64 and values.flags.writeable \
            and values.flags.c_contiguous:
        a = values
    else:
        a = np.array(values, dtype=np.int64)
    size = a.shape[0] if a.ndim == 1 else 0
    if size == 0 or size & (size - 1):
        raise PreconditionError("transform length must be a power of two")
    h = 1
    while h < size:
        v = a.reshape(-1, 2, h)
        lo = v[:, 0, :].copy()
        v[:, 0, :] += v[:, 1, :]
        np.subtract(lo, v[:, 1, :], out=v[:, 1, :])
        h *= 2
    return a


@dataclass(frozen=True)
class CosetSpectrum:
    """``raw`` is indexed by character coefficients in ``coset.subgroup`` coordinates.

    ``shift`` is the translate actually used; it differs from ``coset.rep`` by
    an element of the subgroup, which flips signs but not magnitudes.
    """

    coset: Coset
    shift: int
    raw: np.ndarray

    @property
    def subgroup(self) -> Subgroup:
        return self.coset.subgroup

    @property
    def mass(self) -> int:
        return int(self.raw[0])

    def coefficient(self, eta: int) -> Fraction:
        return Fraction(int(self.raw[eta]), self.subgroup.order)


def _check(A: SetF2, H: Subgroup) -> None:
    if H.ambient_n != A.n:
        raise PreconditionError("subgroup and set live in different ambient groups")


def shifted_values(A: SetF2, H: Subgroup, g: int) -> np.ndarray:
    """``A(x + g)`` for ``x`` in ``H``, in coordinate order."""
    _check(A, H)
    return A.bitmap[H.elements() ^ g].astype(np.int64)


def coset_spectrum(A: SetF2, coset: Coset, shift: int | None = None) -> CosetSpectrum:
    if coset.subgroup.ambient_n != A.n:
        raise PreconditionError("coset and set live in different ambient groups")
    g = coset.rep if shift is None else int(shift)
    if coset.subgroup.reduce(g) != coset.rep:
        raise PreconditionError("shift is not in the coset")
    raw = wht_in_place(shifted_values(A, coset.subgroup, g))
    raw.flags.writeable = False
    return CosetSpectrum(coset, g, raw)


def shifted_spectrum(A: SetF2, H: Subgroup, g: int) -> CosetSpectrum:
    return coset_spectrum(A, Coset.of(H, g), g)


def subcoset_counts(A: SetF2, H: Subgroup, Hp: Subgroup, g: int) -> tuple[np.ndarray, np.ndarray]:
    """For each coset ``Hp + v`` inside ``H``: its rep ``v`` and ``|A ∩ (Hp + g + v)|``."""
    q = Quotient(Hp, H)
    counts = np.bincount(q.of_elements, weights=shifted_values(A, H, g), minlength=q.index)
    return q.reps, counts.astype(np.int64)


def averaged_density(A: SetF2, H: Subgroup, Hp: Subgroup, g: int) -> dict[int, Fraction]:
    reps, counts = subcoset_counts(A, H, Hp, g)
    order = np.argsort(reps)
    return {int(reps[i]): Fraction(int(counts[i]), Hp.order) for i in order}


def character_signs(H: Subgroup, z: int) -> np.ndarray:
    """``chi_eta(z)`` for every character ``eta`` of ``H``, indexed by coefficients."""
    idx = np.arange(H.order, dtype=np.int64)
    return 1 - 2 * parity(idx & H.coords(z))


def annihilator_correlation(f: CosetSpectrum, g: CosetSpectrum, Hp: Subgroup, z: int) -> Fraction:
    """``sum over eta in ann(Hp) of f^(eta) g^(eta) chi_eta(z)`` for two spectra on one ``H``."""
    H = f.subgroup
    if g.subgroup != H:
        raise PreconditionError("spectra are over different subgroups")
    etas = span_table(annihilator_basis(Hp, H))
    signs = character_signs(H, z)[etas]
    total = int(np.sum(f.raw[etas].astype(object) * g.raw[etas] * signs))
    return Fraction(total, H.order * H.order)


def averaged_correlation(A: SetF2, B: SetF2, H: Subgroup, Hp: Subgroup,
                         ga: int, gb: int, z: int) -> Fraction:
    """``E_v [ Abar(v) * Bbar(v + z) ]`` over the ``Hp``-cosets of ``H``.

    ``Abar(v) = |A ∩ (Hp + ga + v)| / |Hp|`` and likewise for ``B`` with ``gb``.
    """
    q = Quotient(Hp, H)
    _, ca = subcoset_counts(A, H, Hp, ga)
    _, cb = subcoset_counts(B, H, Hp, gb)
    shifted = q.index_of(q.reps ^ z)
    total = int(np.sum(ca.astype(object) * cb[shifted]))
    return Fraction(total, q.index * Hp.order * Hp.order)
