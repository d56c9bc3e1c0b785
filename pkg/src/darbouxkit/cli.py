"""Command-line interface.

Exit codes: 0 success, 1 mathematical negative (condition fails, no
transformation, verification fails), 2 usage or parse error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import expr as ex
from .darboux import (check_condition, classify, construct, darboux_from_solution,
                      largest_pure_index, laplace_transformation)
from .errors import DarbouxError
from .intertwine import solve_intertwining
from .lpdo import Direction, apply
from .syntax import ParseError, parse_expr, parse_operator, parse_operator_file, print_expr, print_operator
from .wronskian import WronskianSpec, has_existence_guarantee, wronskian, wronskian_operator

SEED_ENV = "DARBOUXKIT_SEED"


def _directions(choice):
    if choice == "both":
        return [Direction.DX, Direction.DY]
    return [Direction.parse(choice)]


def _read_operators(path):
    with open(path, encoding="utf-8") as fh:
        return parse_operator_file(fh.read())


def _failure(exc):
    return {"error": type(exc).__name__, "message": str(exc)}


def cmd_check(args, kw):
    results, negative = [], False
    for line, L in _read_operators(args.file):
        for d in _directions(args.direction):
            report = check_condition(L, d, **kw)
            negative |= not report.holds.ok
            results.append({"line": line, "operator": print_operator(L), **report.as_dict()})
    return results, negative


def cmd_transform(args, kw):
    psi = parse_expr(args.psi) if args.psi is not None else None
    results, negative = [], False
    for line, L in _read_operators(args.file):
        for d in _directions(args.direction):
            entry = {"line": line, "operator": print_operator(L), "direction": d.value}
            try:
                if psi is None:
                    r = construct(L, d, **kw)
                else:
                    r = darboux_from_solution(L, psi, d, **kw)
                entry.update(r.as_dict())
                negative |= not r.verification.ok
            except DarbouxError as exc:
                entry.update(_failure(exc))
                negative = True
            results.append(entry)
    return results, negative


def cmd_invertible(args, kw):
    results, negative = [], False
    for line, L in _read_operators(args.file):
        for d in _directions(args.direction):
            entry = {"line": line, "operator": print_operator(L), "direction": d.value}
            try:
                entry["invertibility"] = classify(L, d, **kw).as_dict()
                entry["largest_pure_index"] = largest_pure_index(L, d, **kw)
            except DarbouxError as exc:
                entry.update(_failure(exc))
                negative = True
            results.append(entry)
    return results, negative


def cmd_laplace(args, kw):
    results, negative = [], False
    for line, L in _read_operators(args.file):
        for d in _directions(args.direction):
            entry = {"line": line, "operator": print_operator(L), "direction": d.value}
            try:
                entry.update(laplace_transformation(L, d, **kw).as_dict())
            except DarbouxError as exc:
                entry.update(_failure(exc))
                negative = True
            results.append(entry)
    return results, negative


def cmd_wronskian(args, kw):
    functions = [parse_expr(f) for f in args.functions]
    w = wronskian(WronskianSpec(args.t, args.s, functions))
    return [{"t": args.t, "s": args.s, "functions": [print_expr(f) for f in functions],
             "determinant": print_expr(w)}], False


def cmd_wop(args, kw):
    psis = [parse_expr(p) for p in args.psis]
    try:
        M = wronskian_operator(args.m, args.n, psis, **kw)
    except DarbouxError as exc:
        return [_failure(exc)], True
    results = [{"m": args.m, "n": args.n, "psis": [print_expr(p) for p in psis],
                "M": print_operator(M)}]
    negative = False
    if args.operator:
        for line, L in _read_operators(args.operator):
            entry = {"line": line, "operator": print_operator(L),
                     "existence_guarantee": has_existence_guarantee(L)}
            in_kernel = all(ex.is_zero(apply(L, p), **kw).zero for p in psis)
            entry["psis_in_kernel"] = in_kernel
            found = solve_intertwining(L, M) if in_kernel else None
            if found is None:
                entry["transformation"] = None
                negative = True
            else:
                N, L1 = found
                entry["transformation"] = {"N": print_operator(N), "L1": print_operator(L1)}
            results.append(entry)
    return results, negative


def cmd_verify(args, kw):
    from .darboux import verify_intertwining
    ops = {name: parse_operator(getattr(args, name)) for name in ("N", "L", "L1", "M")}
    verdict = verify_intertwining(ops["N"], ops["L"], ops["L1"], ops["M"], **kw)
    entry = {name: print_operator(op) for name, op in ops.items()}
    entry["verification"] = verdict.as_dict()
    return [entry], not verdict.ok


def _format_text(results):
    lines = []
    for entry in results:
        lines.append("; ".join(f"{k}: {_flat(v)}" for k, v in entry.items()))
    return "\n".join(lines)


def _flat(v):
    if isinstance(v, dict):
        return "{" + ", ".join(f"{k}={_flat(x)}" for k, x in v.items()) + "}"
    if isinstance(v, list):
        return "[" + ", ".join(_flat(x) for x in v) + "]"
    return str(v)


def build_parser():
    parser = argparse.ArgumentParser(prog="darbouxkit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, direction=True, both=True):
        if direction:
            choices = ["dx", "dy", "both"] if both else ["dx", "dy"]
            p.add_argument("--direction", choices=choices, default="dx")
        p.add_argument("--json", action="store_true", help="emit a JSON report")
        p.add_argument("--seed", type=int, default=None,
                       help=f"zero-testing seed (default ${SEED_ENV} or {ex.DEFAULT_SEED})")
        p.add_argument("--timing", action="store_true", help="include wall time in the report")

    p = sub.add_parser("check", help="test whether M = Dx / Dy admits a transformation")
    p.add_argument("file")
    common(p)
    p.set_defaults(run=cmd_check)

    p = sub.add_parser("transform", help="construct (M, N, L1)")
    p.add_argument("file")
    p.add_argument("--psi", help="kernel element; use M = D - psi_D/psi")
    common(p)
    p.set_defaults(run=cmd_transform)

    p = sub.add_parser("invertible", help="classify ker L ∩ ker M")
    p.add_argument("file")
    common(p)
    p.set_defaults(run=cmd_invertible)

    p = sub.add_parser("laplace", help="Laplace transformation of Dx*Dy + a*Dx + b*Dy + c")
    p.add_argument("file")
    common(p)
    p.set_defaults(run=cmd_laplace)

    p = sub.add_parser("wronskian", help="(t,s)-Wronskian of functions")
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("functions", nargs="+")
    common(p, direction=False)
    p.set_defaults(run=cmd_wronskian)

    p = sub.add_parser("wop", help="Wronskian-formula operator from kernel elements")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("psis", nargs="+")
    p.add_argument("--operator", help="operator file to complete and verify against")
    common(p, direction=False)
    p.set_defaults(run=cmd_wop)

    p = sub.add_parser("verify", help="check N∘L = L1∘M")
    for name in ("N", "L", "L1", "M"):
        p.add_argument(f"--{name}", required=True)
    common(p, direction=False)
    p.set_defaults(run=cmd_verify)
    return parser


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(argv)
    seed = args.seed
    if seed is None:
        seed = int(os.environ.get(SEED_ENV, ex.DEFAULT_SEED))
    started = time.perf_counter()
    try:
        results, negative = args.run(args, {"seed": seed})
    except ParseError as err:
        print(f"parse error: {err}", file=sys.stderr)
        return 2
    except (OSError, DarbouxError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    report = {"command": argv, "seed": seed, "results": results}
    if args.timing:
        report["seconds"] = round(time.perf_counter() - started, 3)
    if args.json:
        print(json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False))
    else:
        print(f"darbouxkit {' '.join(argv)}  (seed {seed})")
        if results:
            print(_format_text(results))
        if args.timing:
            print(f"{report['seconds']}s")
    return 1 if negative else 0


if __name__ == "__main__":
    sys.exit(main())
