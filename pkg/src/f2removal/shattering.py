"""Mean entropy potential, shattering certificates and the shatter-or-count dichotomy.

Entropy ``f(x) = x ln x`` is the only floating point quantity; densities,
counts and thresholds are exact.  The logarithm is natural: with base 2 the
constant ``(1 - 3/4 + f(3/4)) / 20`` is negative and the entropy increment
argument collapses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

import numpy as np

from .errors import InvariantError, PreconditionError
from .fourier import subcoset_counts
from .gf2_linalg import Coset, Subgroup
from .regularity import Decomposition, index_exponent_bound, superregular_decomposition
from .sets import SetF2
from .triangles import _three_coset_terms, count_three_cosets_direct

ALPHA = Fraction(1, 20)
BETA = Fraction(3, 4)
FLOAT_SLACK = 1e-9


def entropy(x) -> float:
    x = Fraction(x)
    if not 0 <= x <= 1:
        raise PreconditionError(f"entropy is defined on [0, 1], got {x}")
    if x == 0:
        return 0.0
    return float(x) * math.log(x)


def _entropy_of_counts(counts: np.ndarray, cell: int) -> float:
    values, mult = np.unique(counts, return_counts=True)
    terms = [int(m) * entropy(Fraction(int(c), cell)) for c, m in zip(values, mult)]
    return math.fsum(terms) / counts.size


def mean_entropy(A: SetF2, outer: Coset | None, Hp: Subgroup) -> float:
    """Average of ``f(|A ∩ C| / |Hp|)`` over the ``Hp``-cosets ``C`` of ``outer``.

    ``outer=None`` means the whole group.
    """
    if outer is None:
        outer = Coset(Subgroup.full(A.n), 0)
    if not Hp.is_subgroup_of(outer.subgroup):
        raise PreconditionError("refining subgroup is not inside the outer subgroup")
    _, counts = subcoset_counts(A, outer.subgroup, Hp, outer.rep)
    return _entropy_of_counts(counts, Hp.order)


@dataclass(frozen=True)
class ShatterCertificate:
    refining_subgroup: Subgroup
    target_coset: Coset
    alpha: Fraction
    beta: Fraction
    k: float
    measured_low_fraction: Fraction
    base_density: Fraction


def low_fraction(A: SetF2, H: Subgroup, g: int, Hp: Subgroup, beta) -> tuple[Fraction, Fraction]:
    """Base density ``d`` on ``H + g`` and the fraction of ``Hp``-cosets with density ``<= beta d``."""
    _, counts = subcoset_counts(A, H, Hp, g)
    total = int(counts.sum())
    beta = Fraction(beta)
    # count / |Hp| <= beta * total / |H|, cleared of denominators
    low = counts * H.order * beta.denominator <= beta.numerator * total * Hp.order
    return Fraction(total, H.order), Fraction(int(np.count_nonzero(low)), counts.size)


def check_shatter(A: SetF2, H: Subgroup, g: int, Hp: Subgroup, alpha, beta, k: float
                  ) -> ShatterCertificate | None:
    alpha, beta = Fraction(alpha), Fraction(beta)
    if not Hp.is_subgroup_of(H) or H.ambient_n != A.n:
        raise PreconditionError("refining subgroup is not inside H")
    if not (0 < alpha <= 1 and 0 < beta <= 1):
        raise PreconditionError("alpha and beta must lie in (0, 1]")
    if H.dim - Hp.dim > k + 1e-12:
        return None
    d, frac = low_fraction(A, H, g, Hp, beta)
    if frac < alpha:
        return None
    return ShatterCertificate(Hp, Coset.of(H, g), alpha, beta, float(k), frac, d)


def verify_shatter(A: SetF2, cert: ShatterCertificate) -> bool:
    H = cert.target_coset.subgroup
    d, frac = low_fraction(A, H, cert.target_coset.rep, cert.refining_subgroup, cert.beta)
    return (d == cert.base_density and frac == cert.measured_low_fraction
            and frac >= cert.alpha
            and H.dim - cert.refining_subgroup.dim <= cert.k + 1e-12)


def entropy_increment_lower_bound(alpha, beta, density) -> float:
    alpha, beta, density = Fraction(alpha), Fraction(beta), Fraction(density)
    for name, v in (("alpha", alpha), ("beta", beta), ("density", density)):
        if not 0 <= v <= 1:
            raise PreconditionError(f"{name} must lie in [0, 1], got {v}")
    return (1 - float(beta) + entropy(beta)) * float(alpha) * float(density)


def defect_jensen_slack(weights: Sequence, values: Sequence, beta, low_index_set) -> float:
    """``sum w_i f(x_i) - f(a) - (1 - beta + f(beta)) c a``.

    ``a`` is the weighted mean and ``c`` the weight on ``low_index_set``.
    Values may exceed 1, so ``f`` is evaluated as plain ``x ln x`` here.
    """
    w = [Fraction(x) for x in weights]
    x = [Fraction(v) for v in values]
    beta = Fraction(beta)
    if len(w) != len(x) or any(v < 0 for v in w + x) or sum(w) != 1:
        raise PreconditionError("weights must be nonnegative and sum to 1; values nonnegative")
    if not 0 <= beta <= 1:
        raise PreconditionError("beta must lie in [0, 1]")
    a = sum(wi * xi for wi, xi in zip(w, x))
    low = set(low_index_set)
    if any(x[i] > beta * a for i in low):
        raise PreconditionError("a low-index value exceeds beta times the mean")
    c = sum(w[i] for i in low)

    def f(v: Fraction) -> float:
        return 0.0 if v == 0 else float(v) * math.log(v)

    lhs = math.fsum(float(wi) * f(xi) for wi, xi in zip(w, x))
    return lhs - f(a) - (1 - float(beta) + f(beta)) * float(c) * float(a)


def defect_jensen_check(weights: Sequence, values: Sequence, beta, low_index_set) -> bool:
    """Whether the defect inequality for entropy holds with slack at least -1e-9."""
    return defect_jensen_slack(weights, values, beta, low_index_set) >= -FLOAT_SLACK


@dataclass(frozen=True)
class TriangleCert:
    count: int
    threshold: Fraction
    part_counts: tuple[int, ...] = ()


@dataclass(frozen=True)
class Shatter:
    cert: ShatterCertificate
    part_index: int
    coset_label: str  # "g2" or "g3"


DichotomyResult = Union[TriangleCert, Shatter]


@dataclass
class DichotomyTrace:
    """Side information gathered while running :func:`shatter_or_count`."""

    densities: tuple[Fraction, Fraction, Fraction] = (Fraction(0),) * 3
    rho: Fraction = Fraction(0)
    k: float = 0.0
    decomposition: Decomposition | None = None
    cs_slack: list[float] = field(default_factory=list)


def coset_densities(A: SetF2, H: Subgroup, *gs: int) -> tuple[Fraction, ...]:
    return tuple(Fraction(A.count_in(Coset.of(H, g)), H.order) for g in gs)


def shatter_or_count(A: SetF2, H: Subgroup, g1: int, g2: int, g3: int,
                     trace: DichotomyTrace | None = None) -> DichotomyResult:
    """Either certify ``d1 d2 d3 |H|^2 / 8`` triangles across the three cosets, or
    find a subgroup that ``(1/20, 3/4, log_{1+rho}(2/d1))``-shatters ``A`` on
    ``H + g2`` or ``H + g3``, where ``rho = d2 d3 / 4``."""
    if g1 ^ g2 ^ g3:
        raise PreconditionError("g1 + g2 + g3 != 0")
    if H.ambient_n != A.n:
        raise PreconditionError("subgroup and set live in different ambient groups")
    d1, d2, d3 = coset_densities(A, H, g1, g2, g3)
    if min(d1, d2, d3) == 0:
        raise PreconditionError("A has zero density on one of the three cosets")
    rho = d2 * d3 / 4
    k = index_exponent_bound(rho, d1 / 2)
    first = A.restrict(Coset.of(H, g1))
    dec = superregular_decomposition(first, H, g1, rho, d1 / 2)
    if trace is not None:
        trace.densities, trace.rho, trace.k, trace.decomposition = (d1, d2, d3), rho, k, dec
    bound_scale = math.sqrt(d2 * d3) * float(d2 * d3) / 4
    counts = []
    for i, p in enumerate(dec.parts):
        for label, g in (("g2", g2), ("g3", g3)):
            cert = check_shatter(A, H, g, p.subgroup, ALPHA, BETA, k)
            if cert is not None:
                return Shatter(cert, i, label)
        diag, full = _three_coset_terms(p.part, A, A, p.subgroup, H, g1, g2, g3, p.shift)
        # off-diagonal part of the bracket, scaled by |H||H_i|, against its Cauchy-Schwarz floor
        off = (full - diag) / H.order
        floor = -float(p.density) * bound_scale * H.order * p.subgroup.order
        if off < floor - 1e-9 * max(1.0, abs(floor)):
            raise InvariantError("off-diagonal Fourier term is below its Cauchy-Schwarz floor")
        if trace is not None:
            trace.cs_slack.append(off - floor)
        c, rem = divmod(full, H.order)
        if rem:
            raise InvariantError("three-coset Fourier sum is not divisible by |H|")
        counts.append(c)
    total = sum(counts)
    threshold = d1 * d2 * d3 * H.order * H.order / 8
    if total < threshold:
        raise InvariantError("no shattering found yet the triangle count is below d1 d2 d3 |H|^2 / 8")
    return TriangleCert(total, threshold, tuple(counts))


def verify_dichotomy(A: SetF2, H: Subgroup, g1: int, g2: int, g3: int,
                     result: DichotomyResult) -> bool:
    """Recheck a dichotomy outcome from ``A`` alone.

    Shatter certificates are recounted; triangle certificates are recounted
    part by part with the direct double loop.
    """
    if isinstance(result, Shatter):
        target = g2 if result.coset_label == "g2" else g3
        return (result.cert.target_coset == Coset.of(H, target)
                and result.cert.alpha >= ALPHA and result.cert.beta <= BETA
                and verify_shatter(A, result.cert))
    d1, d2, d3 = coset_densities(A, H, g1, g2, g3)
    rho = d2 * d3 / 4
    dec = superregular_decomposition(A.restrict(Coset.of(H, g1)), H, g1, rho, d1 / 2)
    counts = tuple(count_three_cosets_direct(p.part, A, A, p.subgroup, H, g1, g2, g3, p.shift)
                   for p in dec.parts)
    threshold = d1 * d2 * d3 * H.order * H.order / 8
    return counts == result.part_counts and sum(counts) == result.count >= threshold == result.threshold
