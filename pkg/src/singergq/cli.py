"""Command line front end.

Exit codes: 0 success, 1 usage or configuration error, 2 a mathematical
claim failed (witness on stderr), 3 a resource guard tripped.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .errors import ClaimMismatch, ResourceLimitError, SingerGQError

SCHEMA = 1


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(1)


def _dump(obj) -> str:
    return json.dumps({"schema": SCHEMA, **obj}, indent=2, sort_keys=True, default=_default) + "\n"


def _default(o):
    import numpy as np

    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, (set, frozenset)):
        return sorted(o, key=repr)
    raise TypeError(f"not serialisable: {type(o).__name__}")


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _pmap(fn, items, jobs: int):
    """Order-preserving map, in worker processes when jobs > 1."""
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, items, chunksize=max(1, len(items) // (4 * jobs))))


# --------------------------------------------------------------------------
# gq


def cmd_gq(args) -> int:
    from .incidence import IncidenceStructure, grid, payne_derive, verify_gq
    from .symplectic import build_wq

    if args.action == "verify":
        if not args.input:
            raise UsageError("gq verify needs --input")
        S = IncidenceStructure.from_csv(Path(args.input).read_text())
        cert = verify_gq(S, method=args.method)
        _emit(_dump({"command": "gq verify", **cert.to_json()}), args.output)
        return 0
    if args.q is None:
        raise UsageError(f"gq {args.action} needs --q")
    if args.action == "grid":
        S = grid(args.q)
        verify_gq(S)
        _emit(S.to_csv() if args.format == "csv" else _dump({"command": "gq grid", **S.certificate.to_json()}), args.output)
        return 0
    W = build_wq(args.q, verify=True)
    if args.action == "build":
        S = W.structure
    else:
        S = payne_derive(W.structure, W.x)
        verify_gq(S)
    if args.format == "csv":
        _emit(S.to_csv(), args.output)
    else:
        _emit(_dump({"command": f"gq {args.action}", "q": args.q, **S.certificate.to_json()}), args.output)
    return 0


# --------------------------------------------------------------------------
# singer


def _lift_record(cand):
    from .singer import lift_eta

    return lift_eta(cand).to_json()


def cmd_singer(args) -> int:
    from .singer import (
        classify_abelian_quotients,
        enumerate_bl,
        prime_case_census,
        total_count,
        total_count_enumerated,
    )
    from .gf import prime_power

    if args.action == "census" and args.prime_case:
        if args.p is None:
            raise UsageError("--prime-case needs --p")
        c = prime_case_census(args.p, args.line)
        status = "PASS" if c.matches else "FAIL"
        doc = {
            "command": "singer census",
            "p": c.p,
            "groups": c.groups,
            "census": c.census,
            "claims": [{"claim": "prime_case_census", "status": status, "expected": c.expected, "witness": c.census}],
        }
        _emit(_dump(doc), args.output)
        return 0 if c.matches else 2
    if args.q is None:
        raise UsageError(f"singer {args.action} needs --q")
    q = args.q
    p, h = prime_power(q)
    cands = enumerate_bl(q, args.line)
    if args.sample is not None and args.sample < len(cands):
        import random

        rng = random.Random(args.seed)
        cands = sorted(rng.sample(cands, args.sample), key=lambda c: c.index)
    records = _pmap(_lift_record, cands, args.jobs)
    cls = classify_abelian_quotients(q, args.line).counts
    summary = {
        "total": len(records),
        "abelian_quotient_count": cls["abelian"],
        "elementary_abelian_quotient_count": cls["elementary_abelian"],
        "distinct_fingerprints": len(
            Counter((r["exponent"], r["center_order"], r["derived_order"], r["class"]) for r in records)
        ),
        "distinct_commuting_multisets": len(
            Counter(tuple(sorted((d for d in r["commuting_dims"] if d), reverse=True)) for r in records)
        ),
    }
    doc = {"command": f"singer {args.action}", "q": q, "line": args.line, "summary": summary}
    if args.action in ("enumerate", "classify"):
        doc["records"] = records
        _emit(_dump(doc), args.output)
        return 0
    claims = []
    full = len(enumerate_bl(q, args.line))
    claims.append(_claim("bl_count", full == p ** (h * h), p ** (h * h), full))
    expected_ab = q if q % 2 else 1
    claims.append(_claim("abelian_quotient_count", cls["abelian"] == expected_ab, expected_ab, cls))
    claims.append(
        _claim("sharply_transitive", all(r["sharply_transitive"] for r in records), True, len(records))
    )
    if q <= 4:
        r = total_count_enumerated(q)
        claims.append(_claim("total_count", r.formula == r.non_elementary_distinct, total_count(q), r.__dict__))
    doc["claims"] = claims
    _emit(_dump(doc), args.output)
    return 0 if all(c["status"] == "PASS" for c in claims) else 2


def _claim(name, ok, expected, witness) -> dict:
    return {"claim": name, "status": "PASS" if ok else "FAIL", "expected": expected, "witness": witness}


# --------------------------------------------------------------------------
# hyperoval


def cmd_hyperoval(args) -> int:
    from . import hyperoval as hy

    if args.kind == "payne":
        H = hy.payne_hyperoval(args.q)
    else:
        H = hy.translation_hyperoval(args.q, args.k)
    doc = {"command": "hyperoval build", "q": args.q, "kind": H.kind, "points": H.points.tolist()}
    ok = True
    if args.verify:
        if args.kind == "payne":
            _, rep = hy.elation_singer(H)
            q = args.q
            ok = (
                rep.order == q**3
                and rep.exponent == 4
                and rep.translation_intersection == q**3 // 2
                and rep.sharply_transitive
                and rep.extra["g_squared_is_h110"]
            )
            doc["elation_singer"] = rep.to_json()
        else:
            rep = hy.singer_report(hy.translation_singer(args.q, args.k), H)
            q = args.q
            ok = (rep.order, rep.exponent, rep.center_order) == (q**3, 4, q**2) and rep.sharply_transitive
            doc["translation_singer"] = rep.to_json()
        if args.q**3 <= 2**12:
            cert = hy.t2star(H, verify=True).certificate
            doc["t2star"] = cert.to_json()
            ok &= (cert.s, cert.t) == (args.q - 1, args.q + 1)
        doc["status"] = "PASS" if ok else "FAIL"
    _emit(_dump(doc), args.output)
    return 0 if ok else 2


# --------------------------------------------------------------------------
# lattice


def _coord(text: str) -> tuple[int, ...]:
    return tuple(int(t) for t in text.split(",") if t.strip())


def cmd_lattice(args) -> int:
    from . import lattice as la
    from .singer import BLCandidate, lift_eta
    from .symplectic import build_wq

    q = args.q
    if q is None:
        raise UsageError("lattice emit needs --q")
    W = build_wq(q)
    from .gf import prime_power

    h = prime_power(q)[1]
    zero = ",".join(["0"] * h * h)
    a = _coord(zero if args.classic or args.singer_a is None else args.singer_a)
    b = _coord(zero if args.classic or args.singer_b is None else args.singer_b)
    groups = []
    for coord in (a, b):
        if len(coord) != h * h:
            raise UsageError(f"a singer coordinate needs {h * h} entries")
        groups.append(lift_eta(BLCandidate(q, args.line, coord)).Sgroup)
    L1 = la.local_data(W.derived, groups[0], 0, W.derived_points)
    L2 = la.local_data(W.derived, groups[1], 0, W.derived_points)
    m = la.check_local_iso(L1, L2)
    P = la.gamma1(L1, L2, m)
    h2 = la.homology_metadata(groups[0], groups[1])
    text = la.export_presentation(P, args.format)
    side = la.sidecar(P, h2)
    if args.output:
        Path(args.output).write_text(text)
        Path(args.output + ".json").write_text(side)
        sys.stdout.write(side)
    else:
        sys.stdout.write(text)
    return 0


# --------------------------------------------------------------------------
# report


def cmd_report(args) -> int:
    from .checks import CHECKS, run_all

    ids = list(range(1, len(CHECKS) + 1)) if args.all or not args.checks else [int(i) for i in args.checks.split(",")]
    results = run_all(ids, max_q=args.max_q, jobs=args.jobs)
    if args.format == "markdown":
        rows = ["| # | claim | status |", "|---|---|---|"]
        rows += [f"| {r.id} | {r.title} | {'PASS' if r.passed else 'FAIL'} |" for r in results]
        text = "\n".join(rows) + "\n"
    else:
        # timings vary between runs and stay out of the document
        rows = [{k: v for k, v in r.to_json().items() if k != "seconds"} for r in results]
        text = _dump({"command": "report", "max_q": args.max_q, "rows": rows})
    _emit(text, args.output)
    return 0 if all(r.passed for r in results) else 2


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="singergq", description="Singer groups of generalized quadrangles.")
    ap.add_argument("--max-order", type=int, help="override the group order guard")
    ap.add_argument("--jobs", type=int, default=1, help="worker processes")
    # the same options are accepted after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-order", type=int, default=argparse.SUPPRESS)
    common.add_argument("--jobs", type=int, default=argparse.SUPPRESS)
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gq", parents=[common], help="build, derive or verify a quadrangle")
    g.add_argument("action", choices=["build", "derive", "verify", "grid"])
    g.add_argument("--q", type=int)
    g.add_argument("--input")
    g.add_argument("--method", choices=["antiflag", "girth"], default="antiflag")
    g.add_argument("--format", choices=["json", "csv"], default="json")
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_gq)

    s = sub.add_parser("singer", parents=[common], help="lift candidates to Singer groups")
    s.add_argument("action", choices=["enumerate", "classify", "census"])
    s.add_argument("--q", type=int)
    s.add_argument("--p", type=int)
    s.add_argument("--line", type=int, default=0)
    s.add_argument("--sample", type=int)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--prime-case", action="store_true")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_singer)

    h = sub.add_parser("hyperoval", parents=[common], help="hyperovals and their Singer groups")
    h.add_argument("action", choices=["build"])
    h.add_argument("--q", type=int, required=True)
    h.add_argument("--kind", choices=["regular", "translation", "payne"], default="regular")
    h.add_argument("--k", type=int, default=1)
    h.add_argument("--verify", action="store_true")
    h.add_argument("-o", "--output")
    h.set_defaults(func=cmd_hyperoval)

    la = sub.add_parser("lattice", parents=[common], help="emit a Gamma_1 presentation")
    la.add_argument("action", choices=["emit"])
    la.add_argument("--q", type=int)
    la.add_argument("--line", type=int, default=0)
    la.add_argument("--classic", action="store_true", help="use the lift of the zero candidate twice")
    la.add_argument("--singer-a", help="matrix coordinates, comma separated")
    la.add_argument("--singer-b")
    la.add_argument("--format", choices=["gap", "magma", "plain"], default="gap")
    la.add_argument("-o", "--output")
    la.set_defaults(func=cmd_lattice)

    r = sub.add_parser("report", parents=[common], help="run the acceptance table")
    r.add_argument("--all", action="store_true")
    r.add_argument("--checks", help="comma separated check ids")
    r.add_argument("--max-q", type=int)
    r.add_argument("--format", choices=["json", "markdown"], default="json")
    r.add_argument("-o", "--output")
    r.set_defaults(func=cmd_report)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.max_order is not None:
        os.environ["SINGER_GQ_MAX_ORDER"] = str(args.max_order)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"singergq: {exc}", file=sys.stderr)
        return 1
    except ResourceLimitError as exc:
        print(json.dumps({"schema": SCHEMA, "error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 3
    except ClaimMismatch as exc:
        doc = {"schema": SCHEMA, "error": type(exc).__name__, "message": str(exc), "witness": exc.witness}
        print(json.dumps(doc, default=_default), file=sys.stderr)
        return 2
    except (SingerGQError, ValueError) as exc:
        print(f"singergq: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
