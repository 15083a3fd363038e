"""JSON reports (schema ``report v1``) and their re-verification from the input set."""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .driver import (CountCertificate, PartitionState, RemovalReport, TheoremBound,
                     filter_support, verify_count_certificate)
from .gf2_linalg import Coset, Subgroup, intersect
from .regularity import Decomposition, SuperregularPart, check_part, index_exponent_bound
from .sets import SetF2
from .shattering import (ALPHA, BETA, DichotomyResult, DichotomyTrace, Shatter,
                         ShatterCertificate, TriangleCert, verify_dichotomy, verify_shatter)
from .triangles import (FarnessBounds, Packing, Triangle, count_ordered_fourier,
                        degenerate_count, farness_bounds)

SCHEMA = "report v1"


def rational(q) -> dict:
    q = Fraction(q)
    return {"num": q.numerator, "den": q.denominator, "float": float(q)}


def from_rational(d: dict) -> Fraction:
    return Fraction(d["num"], d["den"])


def hexs(xs) -> list[str]:
    return [format(int(x), "x") for x in xs]


def unhex(xs) -> list[int]:
    return [int(x, 16) for x in xs]


def subgroup_doc(H: Subgroup) -> dict:
    return {"dim": H.dim, "basis": hexs(H.basis)}


def subgroup_of(n: int, doc: dict) -> Subgroup:
    return Subgroup.span(n, unhex(doc["basis"]))


def envelope(command: str, digest: str | None, seed, payload: dict) -> dict:
    return {"schema": SCHEMA, "command": command, "input_digest": digest, "seed": seed,
            "payload": payload}


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


# payload builders

def count_payload(A: SetF2, brute: int | None, fourier: int | None) -> dict:
    ordered = fourier if fourier is not None else brute
    return {"n": A.n, "size": len(A), "ordered": ordered, "brute": brute, "fourier": fourier,
            "degenerate": degenerate_count(A), "distinct": (ordered - degenerate_count(A)) // 6}


def farness_doc(f: FarnessBounds) -> dict:
    return {"lower": rational(f.lower), "upper": rational(f.upper), "packing_size": f.packing_size}


def packing_doc(p: Packing) -> dict:
    return {"size": p.size, "contains_zero": p.contains_zero,
            "triangles": [hexs(t) for t in p.triangles]}


def packing_of(doc: dict) -> Packing:
    return Packing(tuple(Triangle.of(*unhex(t)) for t in doc["triangles"]), doc["contains_zero"])


def pack_payload(A: SetF2, packing: Packing, farness: FarnessBounds) -> dict:
    return {"n": A.n, "packing": packing_doc(packing), "farness": farness_doc(farness)}


def decomposition_payload(dec: Decomposition, violations: list[str]) -> dict:
    H = dec.base_coset.subgroup
    parts = [{"size": len(p.part), "subgroup": subgroup_doc(p.subgroup), "shift": format(p.shift, "x"),
              "density": rational(p.density), "iterations": p.iterations,
              "index_log2": H.dim - p.subgroup.dim} for p in dec.parts]
    return {"base": {"subgroup": subgroup_doc(H), "rep": format(dec.base_coset.rep, "x")},
            "rho": rational(dec.rho), "d": rational(dec.d), "parts": parts,
            "leftover_size": len(dec.leftover),
            "index_exponent_bound": index_exponent_bound(dec.rho, dec.d),
            "violations": violations}


def shatter_cert_doc(c: ShatterCertificate) -> dict:
    return {"refining_subgroup": subgroup_doc(c.refining_subgroup),
            "target": {"subgroup": subgroup_doc(c.target_coset.subgroup),
                       "rep": format(c.target_coset.rep, "x")},
            "alpha": rational(c.alpha), "beta": rational(c.beta), "k": c.k,
            "measured_low_fraction": rational(c.measured_low_fraction),
            "base_density": rational(c.base_density)}


def shatter_cert_of(n: int, doc: dict) -> ShatterCertificate:
    H = subgroup_of(n, doc["target"]["subgroup"])
    return ShatterCertificate(subgroup_of(n, doc["refining_subgroup"]),
                              Coset.of(H, int(doc["target"]["rep"], 16)),
                              from_rational(doc["alpha"]), from_rational(doc["beta"]), doc["k"],
                              from_rational(doc["measured_low_fraction"]),
                              from_rational(doc["base_density"]))


def dichotomy_payload(H: Subgroup, gs: tuple[int, int, int], result: DichotomyResult,
                      trace: DichotomyTrace, verified: bool) -> dict:
    out: dict[str, Any] = {"subgroup": subgroup_doc(H), "g": hexs(gs),
                           "densities": [rational(d) for d in trace.densities],
                           "rho": rational(trace.rho), "k": trace.k,
                           "parts": len(trace.decomposition.parts), "verified": verified}
    if isinstance(result, Shatter):
        out["result"] = {"kind": "shatter", "coset": result.coset_label,
                         "part_index": result.part_index, "certificate": shatter_cert_doc(result.cert)}
    else:
        out["result"] = {"kind": "triangles", "count": result.count,
                         "threshold": rational(result.threshold),
                         "part_counts": list(result.part_counts)}
    return out


def count_cert_doc(c: CountCertificate) -> dict:
    doc = {"source": c.source, "count": c.count, "threshold": rational(c.threshold),
           "subgroup": subgroup_doc(c.subgroup), "filtered_size": c.filtered_size}
    if c.triangle is not None:
        doc["triangle"] = hexs(c.triangle)
        doc["part_counts"] = list(c.dichotomy.part_counts)
    return doc


def run_payload(rep: RemovalReport, global_check: bool, max_steps: int | None) -> dict:
    t = rep.trace
    steps = [{"dim": s.dim, "T": s.T, "mean_entropy": s.mean_entropy, "gain": s.gain,
              "certificate": {k: rational(v) if isinstance(v, Fraction) else v
                              for k, v in s.certificate.items()}} for s in t.steps]
    refinements = [{"subgroup": subgroup_doc(r.state.H), "gain": r.gain,
                    "survivors": r.survivors, "shattered_elements": r.shattered_elements,
                    "index_log2": r.index_log2, "index_log2_bound": r.index_log2_bound,
                    "shattered": [{"rep": format(s.rep, "x"), "triangle": hexs(s.triangle),
                                   "certificate": shatter_cert_doc(s.cert)} for s in r.shattered]}
                   for r in t.refinements]
    return {"epsilon0": rational(rep.epsilon0), "epsilon": rational(3 * rep.epsilon0),
            "packing": packing_doc(rep.packing), "farness": farness_doc(rep.farness),
            "triangle_count": rep.triangle_count, "delta_witness": rational(rep.delta_witness),
            "outcome": t.outcome, "steps": steps, "refinements": refinements,
            "certificate": count_cert_doc(t.certificate) if t.certificate else None,
            "global_check": global_check, "max_steps": max_steps}


def bound_payload(b: TheoremBound) -> dict:
    return {"epsilon": rational(b.epsilon), "epsilon0": rational(b.epsilon0), "steps": b.steps,
            "log_factor": b.log_factor,
            "partition": {"height": b.partition.height, "top": b.partition.top},
            "inverse_delta": {"height": b.inverse_delta.height, "top": b.inverse_delta.top}}


# verification

def verify_report(A: SetF2, doc: dict) -> list[str]:
    """Problems found when rechecking ``doc`` against ``A``; empty means verified."""
    if doc.get("schema") != SCHEMA:
        return [f"unknown schema {doc.get('schema')!r}"]
    check = _VERIFIERS.get(doc.get("command"))
    if check is None:
        return [f"command {doc.get('command')!r} carries no certificate"]
    return check(A, doc["payload"])


def _verify_count(A: SetF2, p: dict) -> list[str]:
    c = count_ordered_fourier(A)
    bad = []
    if p["ordered"] != c:
        bad.append(f"ordered count {p['ordered']} != {c}")
    if 6 * p["distinct"] + degenerate_count(A) != c:
        bad.append("distinct count inconsistent")
    return bad


def _verify_pack(A: SetF2, p: dict) -> list[str]:
    try:
        f = farness_bounds(A, packing_of(p["packing"]))
    except ValueError as exc:
        return [str(exc)]
    return [] if farness_doc(f) == p["farness"] else ["farness bounds differ"]


def _verify_decompose(A: SetF2, p: dict) -> list[str]:
    n = A.n
    H = subgroup_of(n, p["base"]["subgroup"])
    g = int(p["base"]["rep"], 16)
    rho, d = from_rational(p["rho"]), from_rational(p["d"])
    rest = A.restrict(Coset.of(H, g))
    source = rest
    bad = []
    for i, pd in enumerate(p["parts"]):
        sub = subgroup_of(n, pd["subgroup"])
        z = int(pd["shift"], 16)
        part = rest.restrict(Coset.of(sub, z ^ g))
        if len(part) != pd["size"]:
            bad.append(f"part {i}: size {len(part)} != {pd['size']}")
        sp = SuperregularPart(part, sub, z, g, rho, Fraction(len(part), sub.order))
        bad += [f"part {i}: {b}" for b in check_part(sp, source, H, d)]
        rest = rest - part
    if len(rest) != p["leftover_size"]:
        bad.append("leftover size differs")
    if len(rest) > d * H.order:
        bad.append("leftover exceeds d|H|")
    return bad


def _verify_shatter(A: SetF2, p: dict) -> list[str]:
    n = A.n
    H = subgroup_of(n, p["subgroup"])
    g1, g2, g3 = unhex(p["g"])
    r = p["result"]
    if r["kind"] == "shatter":
        res: DichotomyResult = Shatter(shatter_cert_of(n, r["certificate"]), r["part_index"], r["coset"])
    else:
        res = TriangleCert(r["count"], from_rational(r["threshold"]), tuple(r["part_counts"]))
    return [] if verify_dichotomy(A, H, g1, g2, g3, res) else ["dichotomy result does not recheck"]


def _verify_run(A: SetF2, p: dict) -> list[str]:
    n = A.n
    bad = []
    if p["triangle_count"] != count_ordered_fourier(A):
        bad.append("triangle count differs")
    bad += _verify_pack(A, p)
    packing = packing_of(p["packing"])
    Aprime = SetF2.from_elements(n, packing.support())
    epsilon = Fraction(len(Aprime), A.size)
    if from_rational(p["epsilon"]) != epsilon:
        bad.append("epsilon differs from the packing coverage")
    H = Subgroup.full(n)
    for i, r in enumerate(p["refinements"]):
        state = PartitionState(Aprime, H)
        filtered, _ = filter_support(Aprime, state, epsilon)
        Hnew = H
        for s in r["shattered"]:
            cert = shatter_cert_of(n, s["certificate"])
            if cert.target_coset.subgroup != H or not verify_shatter(filtered, cert):
                bad.append(f"refinement {i}: shatter certificate does not recheck")
            if cert.alpha < ALPHA or cert.beta > BETA:
                bad.append(f"refinement {i}: certificate parameters too weak")
            Hnew = intersect(Hnew, cert.refining_subgroup)
        if Hnew != subgroup_of(n, r["subgroup"]):
            bad.append(f"refinement {i}: refined subgroup differs")
        gain = PartitionState(Aprime, Hnew).mean_entropy - state.mean_entropy
        if gain < float(epsilon) / 3600 - 1e-9:
            bad.append(f"refinement {i}: gain {gain} below epsilon/3600")
        H = Hnew
    c = p["certificate"]
    if c is not None:
        cert = CountCertificate(c["count"], from_rational(c["threshold"]), subgroup_of(n, c["subgroup"]),
                                c["filtered_size"], c["source"],
                                Triangle.of(*unhex(c["triangle"])) if "triangle" in c else None)
        if len(Aprime) == 0:
            ok = c["count"] == 0
        else:
            ok = cert.subgroup == H and verify_count_certificate(Aprime, cert, epsilon)
        if not ok:
            bad.append("triangle certificate does not recheck")
    return bad


_VERIFIERS = {"count": _verify_count, "pack": _verify_pack, "decompose": _verify_decompose,
              "shatter": _verify_shatter, "run": _verify_run}
