"""Superregular parts and superregular decompositions of a coset restriction."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import InvariantError, PreconditionError
from .fourier import coset_spectrum
from .gf2_linalg import Coset, DualCharacter, Subgroup
from .sets import SetF2


@dataclass(frozen=True)
class SuperregularPart:
    part: SetF2
    subgroup: Subgroup
    shift: int
    base_shift: int
    rho: Fraction
    density: Fraction
    densities: tuple[Fraction, ...] = ()

    @property
    def coset(self) -> Coset:
        return Coset.of(self.subgroup, self.shift ^ self.base_shift)

    @property
    def iterations(self) -> int:
        return len(self.densities) - 1


@dataclass(frozen=True)
class Decomposition:
    parts: tuple[SuperregularPart, ...]
    leftover: SetF2
    base_coset: Coset
    rho: Fraction
    d: Fraction


def max_halvings(rho: Fraction, d: Fraction) -> int:
    """``ceil(log_{1+rho}(1/d))``."""
    return max(0, math.ceil(index_exponent_bound(rho, d) - 1e-9))


def index_exponent_bound(rho: Fraction, d: Fraction) -> float:
    """``log_{1+rho}(1/d)`` as a real number."""
    return math.log(1 / d) / math.log1p(rho)


def superregularity_witness(A: SetF2, coset: Coset, rho: Fraction) -> DualCharacter | None:
    """Nonzero character with ``|raw| > rho * raw[0]`` of largest magnitude, if any."""
    rho = Fraction(rho)
    spec = coset_spectrum(A, coset)
    mags = np.abs(spec.raw[1:])
    if mags.size == 0:
        return None
    best = int(np.argmax(mags))
    if mags[best] * rho.denominator > rho.numerator * spec.mass:
        return DualCharacter(coset.subgroup, best + 1)
    return None


def is_superregular(A: SetF2, coset: Coset, rho: Fraction) -> bool:
    return superregularity_witness(A, coset, rho) is None


def _check_params(rho: Fraction, d: Fraction) -> None:
    if not 0 < rho <= 1:
        raise PreconditionError(f"rho must lie in (0, 1], got {rho}")
    if not 0 < d <= 1:
        raise PreconditionError(f"d must lie in (0, 1], got {d}")


def find_superregular_part(A: SetF2, H: Subgroup, g: int, rho, d) -> SuperregularPart:
    """Repeatedly split along a large Fourier coefficient, keeping the denser half."""
    rho, d = Fraction(rho), Fraction(d)
    _check_params(rho, d)
    base = Coset.of(H, g)
    if not A.within(base):
        raise PreconditionError("set is not contained in H + g")
    if len(A) < d * H.order:
        raise PreconditionError(f"|A| = {len(A)} is below d|H| = {d * H.order}")
    cap = max_halvings(rho, d)
    part, sub, z = A, H, 0
    densities = [Fraction(len(A), H.order)]
    while True:
        eta = superregularity_witness(part, Coset.of(sub, g ^ z), rho)
        if eta is None:
            break
        half = sub.kernel(eta.coeffs)
        t = next(half.reduce(b) for b in sub.basis if b not in half)
        stay = part.restrict(Coset.of(half, g ^ z))
        move = part - stay
        if len(move) > len(stay):
            z, part = half.reduce(z ^ t), move
        else:
            z, part = half.reduce(z), stay
        sub = half
        density = Fraction(len(part), sub.order)
        if density < (1 + rho) * densities[-1]:
            raise InvariantError("density failed to grow by a factor 1 + rho")
        densities.append(density)
        if len(densities) - 1 > cap:
            raise InvariantError("halving loop exceeded its iteration bound")
    return SuperregularPart(part, sub, z, int(g), rho, densities[-1], tuple(densities))


def superregular_decomposition(A: SetF2, H: Subgroup, g: int, rho, d) -> Decomposition:
    rho, d = Fraction(rho), Fraction(d)
    _check_params(rho, d)
    base = Coset.of(H, g)
    if not A.within(base):
        raise PreconditionError("set is not contained in H + g")
    parts = []
    rest = A
    while len(rest) > d * H.order:
        p = find_superregular_part(rest, H, g, rho, d)
        parts.append(p)
        rest = rest - p.part
    return Decomposition(tuple(parts), rest, base, rho, d)


def check_part(p: SuperregularPart, source: SetF2, H: Subgroup, d: Fraction) -> list[str]:
    """Names of the violated conclusions a superregular part must satisfy (empty when all hold)."""
    bad = []
    if not p.subgroup.is_subgroup_of(H) or p.shift not in H:
        bad.append("subgroup")
    if p.subgroup.dim < H.dim and (H.dim - p.subgroup.dim) > index_exponent_bound(p.rho, d) + 1e-12:
        bad.append("index")
    if p.subgroup.reduce(p.shift) != p.shift:
        bad.append("shift")
    if not p.part.issubset(source) or not p.part.within(p.coset):
        bad.append("containment")
    if len(p.part) < d * p.subgroup.order:
        bad.append("density")
    if not is_superregular(p.part, p.coset, p.rho):
        bad.append("superregular")
    return bad


def check_decomposition(dec: Decomposition, A: SetF2) -> list[str]:
    H = dec.base_coset.subgroup
    bad = []
    union = dec.leftover
    for i, p in enumerate(dec.parts):
        if not union.isdisjoint(p.part):
            bad.append(f"part {i} overlaps")
        union = union | p.part
        bad += [f"part {i}: {b}" for b in check_part(p, A, H, dec.d)]
    if union != A:
        bad.append("partition")
    if len(dec.leftover) > dec.d * H.order:
        bad.append("leftover")
    return bad
