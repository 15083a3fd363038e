"""Command-line entry point: ``f2removal <command> ...``.

Exit codes: 0 success, 2 usage or parse error, 3 I/O error, 4 internal
invariant breach, 5 precondition violation.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

from . import report, setfile
from .driver import run_removal, theorem_bound
from .errors import InvariantError, PreconditionError
from .fourier import wht_in_place
from .gf2_linalg import Coset, subgroup_from_generators
from .instances import GeneratorSpec, gen_disjoint_triangle_union
from .regularity import check_decomposition, superregular_decomposition
from .shattering import DichotomyTrace, shatter_or_count, verify_dichotomy
from .triangles import count_ordered_bruteforce, count_ordered_fourier, farness_bounds, greedy_max_packing

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_INVARIANT, EXIT_PRECONDITION = 0, 2, 3, 4, 5

KIND_ALIASES = {
    "random": "random_density",
    "halfspace": "triangle_free_halfspace",
    "triangles": "disjoint_triangle_union",
    "coset": "subgroup_coset",
    "planted": "planted_subgroup_noise",
}


class UsageError(Exception):
    pass


class _IOFailure(Exception):
    pass


def _hex(s: str) -> int:
    try:
        v = int(s, 16)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a hex vector: {s!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError("vectors are non-negative")
    return v


def _rational(s: str) -> Fraction:
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {s!r}") from None


def _load(path: str):
    try:
        return setfile.read(path)
    except OSError as exc:
        raise _IOFailure(str(exc)) from exc


def _emit(args, doc: dict) -> None:
    text = report.dumps(doc)
    if args.out:
        try:
            setfile.write_atomic(args.out, text)
        except OSError as exc:
            raise _IOFailure(str(exc)) from exc
    else:
        sys.stdout.write(text)


def cmd_gen(args) -> int:
    kind = KIND_ALIASES.get(args.kind, args.kind)
    params: dict = {}
    need = {"random_density": ["p"], "disjoint_triangle_union": ["m"], "subgroup_coset": ["dim"],
            "planted_subgroup_noise": ["dim"], "triangle_free_halfspace": []}[kind]
    for name in need:
        if getattr(args, name) is None:
            raise UsageError(f"--kind {args.kind} needs --{name}")
    if kind == "random_density":
        params["p"] = args.p
    elif kind == "triangle_free_halfspace":
        params["coord"] = args.coord
    elif kind == "disjoint_triangle_union":
        params["m"] = args.m
    elif kind == "subgroup_coset":
        params["dim"] = args.dim
    else:
        params["dim"], params["flip"] = args.dim, args.flip
    spec = GeneratorSpec(kind, args.n, params, args.seed)
    A = spec.build()
    echo = " ".join([f"kind={kind}", f"n={args.n}", f"seed={args.seed}"]
                    + [f"{k}={v}" for k, v in sorted(params.items())])
    text = setfile.serialize(A, args.format, "gen " + echo)
    try:
        setfile.write_atomic(args.out, text)
    except OSError as exc:
        raise _IOFailure(str(exc)) from exc
    extra = ""
    if kind == "disjoint_triangle_union":
        extra = f" accidental={gen_disjoint_triangle_union(args.n, args.m, args.seed).accidental}"
    print(f"{echo} count={len(A)}{extra}")
    return EXIT_OK


def cmd_count(args) -> int:
    A, _, digest = _load(args.input)
    brute = count_ordered_bruteforce(A) if args.method in ("brute", "both") else None
    fourier = count_ordered_fourier(A) if args.method in ("fourier", "both") else None
    if args.method == "both" and brute != fourier:
        raise InvariantError(f"brute-force count {brute} != Fourier count {fourier}")
    _emit(args, report.envelope("count", digest, None, report.count_payload(A, brute, fourier)))
    return EXIT_OK


def cmd_pack(args) -> int:
    A, _, digest = _load(args.input)
    packing = greedy_max_packing(A, args.seed)
    _emit(args, report.envelope("pack", digest, args.seed,
                                report.pack_payload(A, packing, farness_bounds(A, packing))))
    return EXIT_OK


def cmd_decompose(args) -> int:
    A, _, digest = _load(args.input)
    H = subgroup_from_generators(A.n, args.subgroup_gens or [])
    if args.full:
        H = subgroup_from_generators(A.n, [1 << i for i in range(A.n)])
    restricted = A.restrict(Coset.of(H, args.shift))
    dec = superregular_decomposition(restricted, H, args.shift, args.rho, args.d)
    payload = report.decomposition_payload(dec, check_decomposition(dec, restricted))
    _emit(args, report.envelope("decompose", digest, None, payload))
    return EXIT_OK if not payload["violations"] else EXIT_INVARIANT


def cmd_shatter(args) -> int:
    A, _, digest = _load(args.input)
    H = subgroup_from_generators(A.n, args.gens or [])
    g1, g2 = args.g1, args.g2
    g3 = g1 ^ g2
    trace = DichotomyTrace()
    result = shatter_or_count(A, H, g1, g2, g3, trace)
    ok = verify_dichotomy(A, H, g1, g2, g3, result)
    _emit(args, report.envelope("shatter", digest, None,
                                report.dichotomy_payload(H, (g1, g2, g3), result, trace, ok)))
    return EXIT_OK if ok else EXIT_INVARIANT


def cmd_run(args) -> int:
    A, _, digest = _load(args.input)
    rep = run_removal(A, args.seed, max_steps=args.max_steps, global_check=not args.no_global_check)
    payload = report.run_payload(rep, not args.no_global_check, args.max_steps)
    payload["threads"] = args.threads
    _emit(args, report.envelope("run", digest, args.seed, payload))
    return EXIT_OK


def cmd_bound(args) -> int:
    _emit(args, report.envelope("bound", None, None, report.bound_payload(theorem_bound(args.epsilon))))
    return EXIT_OK


def cmd_verify(args) -> int:
    A, _, digest = _load(args.input)
    try:
        with open(args.report, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise _IOFailure(str(exc)) from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"report is not JSON: {exc}") from None
    problems = []
    if doc.get("input_digest") != digest:
        problems.append("input digest does not match the set file")
    problems += report.verify_report(A, doc)
    for p in problems:
        print(f"FAIL {p}")
    if not problems:
        print(f"OK {doc.get('command')} report verified")
    return EXIT_OK if not problems else EXIT_INVARIANT


def cmd_bench(args) -> int:
    rows = []
    for n in range(args.n_min, args.n_max + 1):
        A = GeneratorSpec("random_density", n, {"p": Fraction(1, 2)}, args.seed).build()
        t0 = time.perf_counter()
        count_ordered_fourier(A)
        t1 = time.perf_counter()
        wht_in_place(A.indicator())
        t2 = time.perf_counter()
        rows.append((n, t1 - t0, t2 - t1))
    print("n  fourier_count_s  wht_s")
    for n, a, b in rows:
        print(f"{n:<2d} {a:15.4f} {b:6.4f}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="f2removal", description=__doc__.splitlines()[0])
    ap.add_argument("--threads", type=int, default=1, help="accepted for harnesses; work is single-threaded")
    sub = ap.add_subparsers(dest="command", required=True)

    def with_io(p, needs_in=True):
        if needs_in:
            p.add_argument("--in", dest="input", required=True, help="input set file")
        p.add_argument("--out", help="report path (default: stdout)")
        return p

    g = sub.add_parser("gen", help="generate a set file")
    g.add_argument("--kind", required=True, choices=sorted(set(KIND_ALIASES) | set(KIND_ALIASES.values())))
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--p", type=_rational)
    g.add_argument("--m", type=int)
    g.add_argument("--dim", type=int)
    g.add_argument("--flip", type=_rational, default=Fraction(0))
    g.add_argument("--coord", type=int, default=0)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--format", choices=setfile.FORMATS, default="hex")
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_gen)

    c = with_io(sub.add_parser("count", help="count ordered triangles"))
    c.add_argument("--method", choices=("brute", "fourier", "both"), default="fourier")
    c.set_defaults(func=cmd_count)

    p = with_io(sub.add_parser("pack", help="greedy maximal triangle packing and farness bounds"))
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_pack)

    d = with_io(sub.add_parser("decompose", help="superregular decomposition of A on a coset"))
    d.add_argument("--rho", type=_rational, required=True)
    d.add_argument("--d", type=_rational, required=True)
    d.add_argument("--subgroup-gens", type=_hex, nargs="*")
    d.add_argument("--full", action="store_true", help="use the whole group as H")
    d.add_argument("--shift", type=_hex, default=0)
    d.set_defaults(func=cmd_decompose)

    s = with_io(sub.add_parser("shatter", help="shatter-or-count dichotomy on H+g1, H+g2, H+g1+g2"))
    s.add_argument("--gens", type=_hex, nargs="*")
    s.add_argument("--g1", type=_hex, required=True)
    s.add_argument("--g2", type=_hex, required=True)
    s.set_defaults(func=cmd_shatter)

    r = with_io(sub.add_parser("run", help="the refinement driver"))
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--max-steps", type=int)
    r.add_argument("--no-global-check", action="store_true",
                   help="skip the whole-support count so refinement steps are exercised")
    r.set_defaults(func=cmd_run)

    b = with_io(sub.add_parser("bound", help="tower bound on 1/delta"), needs_in=False)
    b.add_argument("--epsilon", type=_rational, required=True)
    b.set_defaults(func=cmd_bound)

    v = sub.add_parser("verify", help="recheck a report against its input set")
    v.add_argument("--in", dest="input", required=True)
    v.add_argument("--report", required=True)
    v.set_defaults(func=cmd_verify)

    be = sub.add_parser("bench", help="time the Fourier counter and the transform")
    be.add_argument("--n-min", type=int, default=14)
    be.add_argument("--n-max", type=int, default=20)
    be.add_argument("--seed", type=int, default=0)
    be.set_defaults(func=cmd_bench)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except setfile.SetFileError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except _IOFailure as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except InvariantError as exc:
        print(f"invariant breach: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except PreconditionError as exc:
        print(f"precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
