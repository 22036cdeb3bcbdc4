"""Command line front end.

Every subcommand prints one report, JSON by default or CSV with
``--format csv``.  Exit codes: 0 success, 2 parse/usage error, 3 resource
limit, 4 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from typing import Any, Dict, List, Optional, Sequence, Tuple

from . import __version__
from .board import Board, BoardSpecError, HypothesisError, durfee, parse_board
from .complex import RookComplex, f_vector_formula
from .decompose import VertexBoundError, vd_bruteforce, vd_certificate, verify_certificate
from .homology import DEFAULT_MAX_FACES, ResourceLimitError, betti, check_size
from .morse import MorseError, critical_summary, full_matching, require_stirling
from .partitions import facet_count, gf_coefficients, partition_counts, set_partitions, is_intertwined_partition, bijection_check

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_RESOURCE = 3
EXIT_VERIFY = 4


class UsageError(Exception):
    pass


class VerificationFailed(Exception):
    def __init__(self, report: Dict[str, Any], table: List[List[Any]], message: str):
        super().__init__(message)
        self.report = report
        self.table = table


def _placement_token(p: Sequence[Tuple[int, int]]) -> str:
    return " ".join(f"{i}:{j}" for i, j in p) or "-"


def _board(spec: str) -> Board:
    try:
        return parse_board(spec)
    except BoardSpecError as exc:
        raise UsageError(str(exc)) from None


# each command returns (payload, csv table with header row)

def cmd_fvector(args) -> Tuple[Dict[str, Any], List[List[Any]]]:
    b = _board(args.board)
    mode = args.mode or "formula"
    payload: Dict[str, Any] = {"mode": mode}
    formula = enumerated = None
    if mode in ("formula", "both"):
        formula = f_vector_formula(b).counts[1:]
        payload["formula"] = list(formula)
    if mode in ("enumerate", "both"):
        check_size(b, args.max_faces, args.allow_large)
        enumerated = RookComplex(b).f_vector().counts[1:]
        payload["enumerated"] = list(enumerated)
    if mode == "both":
        payload["equal"] = formula == enumerated
    main = formula if formula is not None else enumerated
    payload["reduced_euler"] = -1 + sum((-1) ** d * f for d, f in enumerate(main))
    table = [["dim", "rooks", "formula", "enumerated"]]
    for d in range(max(len(formula or ()), len(enumerated or ()))):
        table.append([
            d, d + 1,
            formula[d] if formula and d < len(formula) else "",
            enumerated[d] if enumerated and d < len(enumerated) else "",
        ])
    if mode == "both" and not payload["equal"]:
        raise VerificationFailed(payload, table, "formula and enumeration disagree")
    return payload, table


def cmd_facets(args):
    b = _board(args.board)
    check_size(b, args.max_faces, args.allow_large)
    cx = RookComplex(b)
    facets = cx.facets()
    by_size: Dict[int, int] = {}
    for f in facets:
        by_size[len(f)] = by_size.get(len(f), 0) + 1
    payload: Dict[str, Any] = {
        "total": len(facets),
        "by_size": {str(k): v for k, v in sorted(by_size.items())},
        "pure": len(by_size) <= 1,
        "durfee": durfee(b),
    }
    table = [["rooks", "count", "formula"]]
    formula: Dict[int, int] = {}
    if b.is_stirling:
        n = b.n
        formula = {n - k: facet_count(n, k) for k in range(n + 1)}
        formula = {r: v for r, v in formula.items() if v}
        payload["formula"] = {str(k): v for k, v in sorted(formula.items())}
        payload["formula_match"] = formula == by_size
    for r in sorted(set(by_size) | set(formula)):
        table.append([r, by_size.get(r, 0), formula.get(r, "")])
    if args.list:
        payload["facets"] = [[list(s) for s in f] for f in facets]
    if b.is_stirling and not payload["formula_match"]:
        raise VerificationFailed(payload, table, "facet counts disagree with the formula")
    return payload, table


def cmd_betti(args):
    b = _board(args.board)
    res = betti(b, max_faces=args.max_faces, allow_large=args.allow_large, threads=args.threads)
    payload = {
        "betti": res.betti,
        "torsion": res.torsion,
        "torsion_free": res.torsion_free,
        "reduced_euler": res.reduced_euler(),
        "f_vector": res.f_vector[1:],
    }
    if res.empty_class:
        payload["betti_minus_one"] = res.empty_class
    table = [["dim", "betti", "torsion"]]
    for d, (x, t) in enumerate(zip(res.betti, res.torsion)):
        table.append([d, x, ";".join(map(str, t))])
    return payload, table


def cmd_morse(args):
    b = _board(args.board)
    try:
        n = require_stirling(b)
    except MorseError as exc:
        raise UsageError(str(exc)) from None
    check_size(b, args.max_faces, args.allow_large)
    m = full_matching(n)
    s = critical_summary(n, m)
    payload: Dict[str, Any] = {
        "counts": s.counts,
        "acyclic": s.acyclic,
        "gamma_size": s.gamma_size,
        "min_dim": s.min_dim,
        "min_dim_all_facets": s.min_dim_all_facets,
        "wedge": {"spheres": s.wedge_spheres[0], "dim": s.wedge_spheres[1]} if s.wedge_spheres else None,
    }
    if args.critical:
        by_dim: Dict[str, List[List[List[int]]]] = {}
        for p in s.critical:
            by_dim.setdefault(str(len(p) - 1), []).append([list(q) for q in p])
        payload["critical"] = by_dim
    table = [["dim", "critical"]] + [[d, c] for d, c in enumerate(s.counts)]
    if args.verify_acyclic and not s.acyclic:
        raise VerificationFailed(payload, table, "matching is not acyclic")
    return payload, table


def cmd_partitions(args):
    n, k = args.n, args.k
    if n < 1 or k < 1:
        raise UsageError("--n and --k must be positive")
    counts = partition_counts(n, k, intertwined=args.intertwined)
    payload: Dict[str, Any] = {"n": n, "k": k, "intertwined": args.intertwined, **counts}
    if args.list:
        parts = [P for P in set_partitions(n, k) if not args.intertwined or is_intertwined_partition(P)]
        payload["partitions"] = [P.as_lists() for P in parts]
    table = [["key", "value"]] + [[key, counts[key]] for key in sorted(counts)]
    return payload, table


def cmd_gf(args):
    if args.k < 0 or args.terms < 0:
        raise UsageError("--k and --terms must be non-negative")
    coeffs = gf_coefficients(args.k, args.terms)
    check = {n: facet_count(n, args.k) for n in range(max(1, 2 * args.k), args.terms + 1)}
    payload = {
        "k": args.k,
        "coefficients": coeffs,
        "matches_facet_count": all(coeffs[n] == v for n, v in check.items()),
    }
    table = [["power", "coefficient"]] + [[i, c] for i, c in enumerate(coeffs)]
    if not payload["matches_facet_count"]:
        raise VerificationFailed(payload, table, "series disagrees with facet counts")
    return payload, table


def cmd_vd(args):
    b = _board(args.board)
    use_cert = args.certificate or not args.bruteforce
    payload: Dict[str, Any] = {}
    verdicts = []
    failed = None
    if use_cert:
        try:
            cert = vd_certificate(b)
        except HypothesisError as exc:
            payload["hypotheses"] = False
            payload["certificate_error"] = str(exc)
        else:
            check = verify_certificate(cert)
            payload["hypotheses"] = True
            payload["certificate_verified"] = check.ok
            payload["certificate_nodes"] = check.nodes
            if args.certificate:
                payload["certificate"] = cert.to_dict()
            if check.ok:
                verdicts.append(True)
            else:
                payload["failure"] = {"path": check.path, "reason": check.reason}
                failed = "certificate does not verify"
    if args.bruteforce:
        verdicts.append(vd_bruteforce(b, args.vertex_bound))
        payload["bruteforce"] = verdicts[-1]
    if verdicts:
        payload["vd"] = verdicts[-1]
    if use_cert and args.bruteforce and "certificate_verified" in payload:
        payload["agree"] = len(set(verdicts)) == 1
        if not payload["agree"]:
            failed = "certificate and brute force disagree"
    table = [["key", "value"]] + [
        [k, json.dumps(v) if isinstance(v, (dict, list)) else v]
        for k, v in sorted(payload.items()) if k != "certificate"
    ]
    if failed:
        raise VerificationFailed(payload, table, failed)
    if "vd" not in payload:
        raise UsageError(payload.get("certificate_error", "nothing to compute"))
    return payload, table


def cmd_bijection(args):
    rep = bijection_check(args.n)
    payload = {
        "n": args.n,
        "ok": rep.ok,
        "sizes": {str(k): {"facets": a, "intertwined": b} for k, (a, b) in sorted(rep.sizes.items())},
        "counterexamples": rep.counterexamples,
    }
    table = [["rooks", "facets", "intertwined"]] + [[k, a, b] for k, (a, b) in sorted(rep.sizes.items())]
    if not rep.ok:
        raise VerificationFailed(payload, table, "bijection check failed")
    return payload, table


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--no-timing", action="store_true", help="omit the timing field")
    common.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    common.add_argument("--max-faces", type=int, default=DEFAULT_MAX_FACES,
                        help="refuse complexes with more faces than this")
    common.add_argument("--allow-large", action="store_true",
                        help="permit complexes beyond desk scale (e.g. stirling:9)")

    parser = argparse.ArgumentParser(prog="rookcomplex", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fvector", parents=[common], help="f-vector by formula and/or enumeration")
    p.add_argument("board")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--formula", dest="mode", action="store_const", const="formula")
    g.add_argument("--enumerate", dest="mode", action="store_const", const="enumerate")
    g.add_argument("--both", dest="mode", action="store_const", const="both")
    p.set_defaults(func=cmd_fvector)

    p = sub.add_parser("facets", parents=[common], help="maximal placements")
    p.add_argument("board")
    p.add_argument("--by-size", action="store_true", help="counts per size (always included)")
    p.add_argument("--list", action="store_true")
    p.set_defaults(func=cmd_facets)

    p = sub.add_parser("betti", parents=[common], help="reduced integral homology")
    p.add_argument("board")
    p.set_defaults(func=cmd_betti)

    p = sub.add_parser("morse", parents=[common], help="Morse matching on a staircase board")
    p.add_argument("board")
    p.add_argument("--verify-acyclic", action="store_true", help="exit 4 if the matching has a cycle")
    p.add_argument("--critical", action="store_true", help="list critical cells")
    p.set_defaults(func=cmd_morse)

    p = sub.add_parser("partitions", parents=[common], help="set partition counts")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--intertwined", action="store_true")
    p.add_argument("--list", action="store_true")
    p.set_defaults(func=cmd_partitions)

    p = sub.add_parser("gf", parents=[common], help="facet generating function coefficients")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--terms", type=int, required=True, help="highest power of x")
    p.set_defaults(func=cmd_gf)

    p = sub.add_parser("vd", parents=[common], help="vertex decomposability")
    p.add_argument("board")
    p.add_argument("--certificate", action="store_true", help="build, verify and emit the shedding tree")
    p.add_argument("--bruteforce", action="store_true", help="exhaustive shedding-vertex search")
    p.add_argument("--vertex-bound", type=int, default=16)
    p.set_defaults(func=cmd_vd)

    p = sub.add_parser("bijection", parents=[common], help="check facets <-> intertwined partitions")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_bijection)
    return parser


def render(report: Dict[str, Any], table: List[List[Any]], fmt: str) -> str:
    if fmt == "csv":
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(table)
        return buf.getvalue()
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    started = time.perf_counter()
    code = EXIT_OK
    try:
        payload, table = args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ResourceLimitError, VertexBoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except VerificationFailed as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        payload, table, code = exc.report, exc.table, EXIT_VERIFY
    report: Dict[str, Any] = {
        "command": argv,
        "board": str(_board(args.board)) if getattr(args, "board", None) else None,
        "payload": payload,
        "version": __version__,
    }
    if not args.no_timing:
        report["timing"] = round(time.perf_counter() - started, 6)
    sys.stdout.write(render(report, table, args.format))
    return code


if __name__ == "__main__":
    sys.exit(main())
