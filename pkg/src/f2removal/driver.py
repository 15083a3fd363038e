"""Entropy-increment refinement loop over coset partitions of F_2^n.

``epsilon`` below is always the element coverage ``|A'| / N = 3 * eps0`` of
the disjoint-triangle support ``A'``.  The density filter and the triangle
threshold of a refinement step are driven by the triangle fraction
``eps0 = epsilon / 3``; with those, every surviving packed triangle has a
shattered coset and the measured gain is at least ``epsilon / 3600``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

import numpy as np

from .errors import InvariantError, PreconditionError
from .fourier import subcoset_counts
from .gf2_linalg import Coset, Subgroup, intersect
from .sets import SetF2
from .shattering import (FLOAT_SLACK, Shatter, ShatterCertificate, TriangleCert,
                         _entropy_of_counts, entropy, shatter_or_count)
from .triangles import (FarnessBounds, Packing, Triangle, count_ordered_fourier,
                        farness_bounds, greedy_max_packing)

TERMINATED = "Terminated"
ENTROPY_CEILING = "EntropyCeiling"
SUBGROUP_EXHAUSTED = "SubgroupExhausted"
STEP_LIMIT = "StepLimit"


class PartitionState:
    """Partition of G into the cosets of ``H``, with the densities of a fixed set."""

    def __init__(self, A: SetF2, H: Subgroup):
        if H.ambient_n != A.n:
            raise PreconditionError("subgroup and set live in different ambient groups")
        self.H = H
        self.T = 1 << (A.n - H.dim)
        self.reps, self.counts = subcoset_counts(A, Subgroup.full(A.n), H, 0)
        self.mean_entropy = _entropy_of_counts(self.counts, H.order)

    @property
    def per_coset_density(self) -> dict[int, Fraction]:
        return {int(r): Fraction(int(c), self.H.order)
                for r, c in sorted(zip(self.reps.tolist(), self.counts.tolist()))}


@dataclass(frozen=True)
class CountCertificate:
    """Triangle certificate for the density-filtered support ``A''``.

    ``source == "global"``: ``count`` ordered triangles of ``A''``.
    ``source == "triangle"``: a per-triangle certificate from the dichotomy.
    """

    count: int
    threshold: Fraction
    subgroup: Subgroup
    filtered_size: int
    source: str
    triangle: Triangle | None = None
    dichotomy: TriangleCert | None = None


@dataclass(frozen=True)
class ShatteredCoset:
    rep: int
    triangle: Triangle
    cert: ShatterCertificate


@dataclass
class Refinement:
    state: PartitionState
    gain: float
    shattered: list[ShatteredCoset]
    survivors: int
    survivor_elements: int
    shattered_elements: int
    index_log2: int
    index_log2_bound: float


def triangle_fraction(epsilon: Fraction) -> Fraction:
    return Fraction(epsilon) / 3


def index_log2_bound(epsilon: Fraction, T: int) -> float:
    """``2 T log_{1 + e^2/16}(4/e)`` with ``e`` the triangle fraction."""
    e = triangle_fraction(epsilon)
    return 2 * T * math.log(4 / e) / math.log1p(e * e / 16)


def filter_support(Aprime: SetF2, state: PartitionState, epsilon) -> tuple[SetF2, np.ndarray]:
    """Drop cosets where ``Aprime`` has density below half the triangle fraction."""
    e = triangle_fraction(epsilon)
    keep = state.counts * 2 * e.denominator >= e.numerator * state.H.order
    kept_reps = state.reps[keep]
    mask = np.zeros(Aprime.size, dtype=bool)
    if kept_reps.size:
        mask[(kept_reps[:, None] ^ state.H.elements()[None, :]).ravel()] = True
    return SetF2(Aprime.n, Aprime.bitmap & mask), kept_reps


def triangle_threshold(epsilon, n: int, T: int) -> Fraction:
    e = triangle_fraction(epsilon)
    N = 1 << n
    return e ** 3 * N * N / (64 * T * T)


def refine_step(Aprime: SetF2, triangles: Sequence[Triangle], state: PartitionState, epsilon,
                *, global_check: bool = True) -> Union[CountCertificate, Refinement]:
    """One refinement step of the entropy-increment loop.

    Returns a triangle certificate, or a refinement of ``state.H`` whose mean
    entropy is larger by at least ``epsilon / 3600``.
    """
    epsilon = Fraction(epsilon)
    n = Aprime.n
    N = 1 << n
    if len(Aprime) != 3 * len(triangles) or epsilon * N != len(Aprime):
        raise PreconditionError("Aprime must be the union of the given triangles, covering epsilon N elements")
    H, T = state.H, state.T
    filtered, kept = filter_support(Aprime, state, epsilon)
    threshold = triangle_threshold(epsilon, n, T)
    if global_check:
        count = count_ordered_fourier(filtered)
        if count >= threshold:
            return CountCertificate(count, threshold, H, len(filtered), "global")
    survivors = sorted(t for t in triangles if all(e in filtered for e in t))
    shattered: dict[int, ShatteredCoset] = {}
    for tri in survivors:
        if any(H.reduce(e) in shattered for e in tri):
            continue
        result = shatter_or_count(filtered, H, tri.x, tri.y, tri.z)
        if isinstance(result, TriangleCert):
            return CountCertificate(result.count, threshold, H, len(filtered), "triangle",
                                    tri, result)
        rep = result.cert.target_coset.rep
        shattered.setdefault(rep, ShatteredCoset(rep, tri, result.cert))
    if not shattered:
        raise InvariantError("no packed triangle survived the density filter")
    Hnew = H
    for s in shattered.values():
        Hnew = intersect(Hnew, s.cert.refining_subgroup)
    new_state = PartitionState(Aprime, Hnew)
    gain = new_state.mean_entropy - state.mean_entropy
    rep_index = {int(r): i for i, r in enumerate(state.reps)}
    shattered_elements = sum(int(state.counts[rep_index[r]]) for r in shattered)
    ref = Refinement(new_state, gain, list(shattered.values()), len(survivors),
                     3 * len(survivors), shattered_elements, n - Hnew.dim,
                     index_log2_bound(epsilon, T))
    problems = refinement_problems(ref, epsilon, n)
    if problems:
        raise InvariantError("; ".join(problems))
    return ref


def refinement_problems(ref: Refinement, epsilon: Fraction, n: int) -> list[str]:
    N = 1 << n
    bad = []
    if ref.gain < float(epsilon) / 3600 - FLOAT_SLACK:
        bad.append(f"entropy gain {ref.gain} is below epsilon/3600")
    if ref.survivor_elements < epsilon * N / 2:
        bad.append("surviving triangles cover fewer than epsilon N / 2 elements")
    if ref.shattered_elements < epsilon * N / 6:
        bad.append("shattered cosets cover fewer than epsilon N / 6 elements")
    if ref.index_log2 > ref.index_log2_bound + 1e-9:
        bad.append("refined index exceeds its bound")
    return bad


@dataclass(frozen=True)
class StepRecord:
    dim: int
    T: int
    mean_entropy: float
    gain: float | None
    certificate: dict


@dataclass
class RefinementTrace:
    steps: list[StepRecord] = field(default_factory=list)
    outcome: str = ""
    certificate: CountCertificate | None = None
    refinements: list[Refinement] = field(default_factory=list)


@dataclass
class RemovalReport:
    epsilon0: Fraction
    packing_size: int
    triangle_count: int
    delta_witness: Fraction
    trace: RefinementTrace
    farness: FarnessBounds
    packing: Packing


def preprocess(A: SetF2, seed: int | None = 0) -> tuple[SetF2, Fraction, Packing]:
    """Support of a greedy maximal disjoint-triangle packing, with ``eps0 = m / N``."""
    packing = greedy_max_packing(A, seed)
    Aprime = SetF2.from_elements(A.n, packing.support())
    return Aprime, Fraction(packing.size, A.size), packing


def step_cap(epsilon0: Fraction) -> int:
    """``ceil(12000 ln(1 / (3 eps0)))``, or 0 for an empty packing."""
    if epsilon0 == 0:
        return 0
    return max(0, math.ceil(12000 * math.log(1 / (3 * epsilon0))))


def _summary(res) -> dict:
    if isinstance(res, CountCertificate):
        return {"kind": "triangles", "source": res.source, "count": res.count,
                "threshold": res.threshold, "filtered_size": res.filtered_size}
    return {"kind": "refinement", "shattered_cosets": len(res.shattered),
            "survivors": res.survivors, "shattered_elements": res.shattered_elements,
            "index_log2": res.index_log2}


def run_removal(A: SetF2, seed: int | None = 0, *, max_steps: int | None = None,
                global_check: bool = True) -> RemovalReport:
    Aprime, eps0, packing = preprocess(A, seed)
    epsilon = 3 * eps0
    triangles = packing.triangles
    state = PartitionState(Aprime, Subgroup.full(A.n))
    trace = RefinementTrace()
    trace.steps.append(StepRecord(state.H.dim, state.T, state.mean_entropy, None, {}))
    cap = step_cap(eps0)
    while True:
        if state.mean_entropy < entropy(min(epsilon, 1)) - FLOAT_SLACK:
            raise InvariantError("mean entropy fell below f(3 eps0)")
        if state.mean_entropy > FLOAT_SLACK or (eps0 > 0 and len(trace.refinements) >= cap):
            # the potential cannot grow past 0, nor survive cap increments
            trace.outcome = ENTROPY_CEILING
            break
        if max_steps is not None and len(trace.refinements) >= max_steps:
            trace.outcome = STEP_LIMIT
            break
        if eps0 == 0:
            # empty support: its zero triangles meet the zero threshold
            res = CountCertificate(0, Fraction(0), state.H, 0, "global")
        else:
            res = refine_step(Aprime, triangles, state, epsilon, global_check=global_check)
        if isinstance(res, CountCertificate):
            trace.outcome = TERMINATED
            trace.certificate = res
            trace.steps.append(StepRecord(state.H.dim, state.T, state.mean_entropy, None, _summary(res)))
            break
        if res.state.H == state.H:
            trace.outcome = SUBGROUP_EXHAUSTED
            break
        trace.refinements.append(res)
        state = res.state
        trace.steps.append(StepRecord(state.H.dim, state.T, state.mean_entropy, res.gain, _summary(res)))
    count = count_ordered_fourier(A)
    return RemovalReport(eps0, packing.size, count, Fraction(count, A.size * A.size), trace,
                         farness_bounds(A, packing), packing)


def verify_count_certificate(Aprime: SetF2, cert: CountCertificate, epsilon) -> bool:
    state = PartitionState(Aprime, cert.subgroup)
    filtered, _ = filter_support(Aprime, state, epsilon)
    if len(filtered) != cert.filtered_size:
        return False
    if cert.threshold != triangle_threshold(epsilon, Aprime.n, state.T):
        return False
    if cert.source == "global":
        return count_ordered_fourier(filtered) == cert.count >= cert.threshold
    tri = cert.triangle
    res = shatter_or_count(filtered, cert.subgroup, tri.x, tri.y, tri.z)
    return isinstance(res, TriangleCert) and res.count == cert.count >= cert.threshold


# Tower arithmetic.  A value is ``exp2^height(top)``; canonical form keeps
# ``top <= 1024``, and ``top > 10`` whenever ``height > 0``.
_TOP_LOW, _TOP_HIGH = 10.0, 1024.0


@dataclass(frozen=True)
class Tower:
    height: int
    top: float

    @classmethod
    def of(cls, height: int, top: float) -> Tower:
        while top > _TOP_HIGH:
            top, height = math.log2(top), height + 1
        while height > 0 and top <= _TOP_LOW:
            top, height = 2.0 ** top, height - 1
        return cls(height, top)

    def exp2(self) -> Tower:
        return Tower.of(self.height + 1, self.top)

    def log2(self) -> Tower:
        if self.height == 0:
            return Tower.of(0, math.log2(self.top))
        return Tower.of(self.height - 1, self.top)

    def add(self, a: float) -> Tower:
        if self.height == 0:
            return Tower.of(0, self.top + a)
        if self.height == 1:
            return Tower.of(1, self.top + math.log1p(a * 2.0 ** -self.top) / math.log(2))
        # a against 2^(>= 2^10): below double precision
        return self

    def mul(self, c: float) -> Tower:
        if self.height == 0:
            return Tower.of(0, self.top * c)
        inner = Tower(self.height - 1, self.top).add(math.log2(c))
        return Tower.of(inner.height + 1, inner.top)


@dataclass(frozen=True)
class TheoremBound:
    epsilon: Fraction
    epsilon0: Fraction
    steps: int
    log_factor: float  # log_{1 + eps0^2/16}(4 / eps0)
    partition: Tower  # bound on the partition size after the last step
    inverse_delta: Tower

    @property
    def height(self) -> int:
        return self.inverse_delta.height

    @property
    def top(self) -> float:
        return self.inverse_delta.top


def theorem_bound(epsilon) -> TheoremBound:
    """Guaranteed ``delta`` of the refinement argument, as a tower ``1 / delta``.

    ``T_0 = 1``, ``T_{i+1} = 2^(2 T_i L)`` with ``L = log_{1+e^2/16}(4/e)`` and
    ``e = epsilon / 3``, iterated ``t = ceil(12000 ln(1/epsilon))`` times;
    ``1 / delta = 64 T_t^2 / e^3``.
    """
    epsilon = Fraction(epsilon)
    if not 0 < epsilon <= 1:
        raise PreconditionError("epsilon must lie in (0, 1]")
    e = epsilon / 3
    t = step_cap(e)
    L = math.log(4 / e) / math.log1p(float(e * e) / 16)
    T = Tower.of(0, 1.0)
    for _ in range(t):
        T = T.mul(2 * L).exp2()
    inv = T.log2().mul(2.0).add(math.log2(64 / e ** 3)).exp2()
    return TheoremBound(epsilon, e, t, L, T, inv)
