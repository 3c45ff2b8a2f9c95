"""Command-line front end.

Every command writes one JSON artifact (``--out``, default stdout) and, unless
``--quiet`` is given, a short human-readable summary on stderr.  Exit status
is 0 on success, 2 when a checked property fails (the artifact then carries
the failure report) and 1 on usage or I/O errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional

from .countable import (
    SCHEDULES,
    ElementEnumeration,
    SolutionTable,
    build_table,
    check_growth,
    default_order,
    generate_true_equations,
    render_table,
    verify_embedding,
)
from .enumeration import BudgetExceeded, compute_g
from .models import check_axioms, get_model, parse_poly
from .ordinals import parse_ordinal
from .solver import DioSystem, PreconditionViolation, SearchLimitExceeded, solve_brute
from .star import parse_index, run_star_construction
from .syntax import ParseError
from .ufamily import DEFAULT_HORIZON, UFamily

EXIT_OK, EXIT_USAGE, EXIT_FAILED = 0, 1, 2


class UsageError(Exception):
    pass


def dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _emit(args, payload) -> None:
    text = payload if isinstance(payload, str) else dump_json(payload)
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _say(args, text: str) -> None:
    if not args.quiet:
        print(text, file=sys.stderr)


def _load_json(path: str):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _nonneg(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {text}")
    return value


# -- commands ----------------------------------------------------------------


def cmd_axioms(args) -> int:
    report = check_axioms(get_model(args.model), args.samples, args.seed)
    _emit(args, report)
    passed = sum(a["passed"] == a["tested"] for a in report["axioms"])
    _say(args, f"{report['model']}: {passed}/{len(report['axioms'])} axioms pass on {args.samples} samples")
    for a in report["axioms"]:
        if a["failures"]:
            _say(args, f"  axiom {a['axiom']} fails, e.g. x,y,z = {a['failures'][0]}")
    return EXIT_OK if report["all_passed"] else EXIT_FAILED


def cmd_solve(args) -> int:
    system = DioSystem.of(_load_json(args.system))
    solution = solve_brute(system, args.bound, args.node_limit)
    out = {
        "equations": [str(e) for e in system.equations],
        "bound": args.bound,
        "solution": None if solution is None else {f"x{i}": v for i, v in solution.items()},
    }
    _emit(args, out)
    _say(args, "no solution in the box" if solution is None else
         " ".join(f"x{i}={v}" for i, v in solution.items()))
    return EXIT_OK


def cmd_embed(args) -> int:
    if args.model != "poly":
        raise UsageError("embed only supports --model poly")
    raw = _load_json(args.elements)
    elems = [parse_poly(e) for e in raw]
    if args.sort:
        elems = default_order(elems)
    enum = ElementEnumeration(tuple(elems))
    try:
        stream = generate_true_equations(enum, args.budget)
        if len(stream) < args.depth:
            _say(args, f"only {len(stream)} equations generated; rows past that repeat the full system")
            stream = stream + [stream[-1]] * (args.depth - len(stream)) if stream else stream
        table = build_table(enum, stream, args.depth, args.schedule)
    except (BudgetExceeded, PreconditionViolation) as exc:
        _emit(args, {"error": type(exc).__name__, "message": str(exc)})
        _say(args, f"embedding failed: {exc}")
        return EXIT_FAILED
    _emit(args, table.to_json())
    _say(args, f"table: {table.depth} rows x {table.width} columns, {len(stream)} equations")
    return EXIT_OK


def cmd_verify(args) -> int:
    table = SolutionTable.from_json(_load_json(args.table))
    report = verify_embedding(table)
    report["growth"] = check_growth(table, args.bound)
    ok = report["ok"] and report["growth"]["ok"]
    report["ok"] = ok
    _emit(args, report)
    _say(args, f"{len(report['facts'])} facts, {len(report['injectivity'])} pairs, "
               f"{len(report['failures'])} failures; growth bound {args.bound}: "
               f"{'ok' if report['growth']['ok'] else 'FAILED'}")
    return EXIT_OK if ok else EXIT_FAILED


def cmd_render_table(args) -> int:
    table = SolutionTable.from_json(_load_json(args.table))
    _emit(args, render_table(table, args.max_rows, csv=args.csv))
    return EXIT_OK


def cmd_ufamily(args) -> int:
    fam = UFamily(args.horizon)
    alpha = parse_ordinal(args.alpha)
    out = {
        "alpha": str(alpha),
        "horizon": args.horizon,
        "construction": fam.construction(alpha),
        "sets": [
            {"n": n, "u": [str(b) for b in sorted(fam.u(alpha, n))]}
            for n in range(1, args.n_max + 1)
        ],
    }
    ok = True
    if args.check:
        out["check"] = fam.check_lemma_clauses(alpha, args.n_max)
        ok = out["check"]["ok"]
    _emit(args, out)
    if args.check:
        r = out["check"]
        _say(args, f"u^{alpha}: {len(r['violations'])} violations of (i),(ii),(iv) up to n={args.n_max}")
        for e in r["clause_iii"]:
            _say(args, f"  (iii) {e['beta']} enters at {e['enters_at']}")
        for e in r["clause_v"]:
            _say(args, f"  (v) ratio < {e['epsilon']} from n={e['from']}")
    return EXIT_OK if ok else EXIT_FAILED


def cmd_budget(args) -> int:
    if args.m > args.n:
        raise UsageError("--m must not exceed --n")
    try:
        b = compute_g(args.n, args.m, args.cap, args.limit)
    except BudgetExceeded as exc:
        _emit(args, {"n": args.n, "m": args.m, "error": "BudgetExceeded", "message": str(exc)})
        _say(args, f"g({args.n},{args.m}) not computable within the enumeration limit; pass --cap")
        return EXIT_FAILED
    _emit(args, b.as_dict())
    _say(args, f"g({b.n},{b.m}) = {b.value}" + (" (capped)" if b.capped else ""))
    for call in b.h_calls:
        _say(args, f"  h({call['n']},{call['m']}) = {call['h']}" + ("" if call["exact"] else "+"))
    return EXIT_OK


def _load_assignment(path: str, index):
    data = _load_json(path)
    if isinstance(data, list):
        if len(data) != len(index):
            raise UsageError("assignment list length differs from the index set")
        return {a: parse_poly(v) for a, v in zip(index, data)}
    return {parse_ordinal(k): parse_poly(v) for k, v in data.items()}


def cmd_star(args) -> int:
    index = parse_index(args.index)
    if not index:
        raise UsageError("--index is empty")
    assignment = _load_assignment(args.assign, index)
    run = run_star_construction(
        index, assignment, args.n_max, args.cap, args.family, args.horizon,
        args.witness_limit, args.box,
    )
    out = run.to_json()
    certified = all(c["status"] == "certified" for c in out["certificates"])
    ok = not out["errors"] and out["soundness"]["ok"] and certified
    out["ok"] = ok
    _emit(args, out)
    _say(args, f"{len(out['cells'])} cells, {len(out['errors'])} errors, "
               f"soundness {'ok' if out['soundness']['ok'] else 'FAILED'}")
    for c in out["certificates"]:
        _say(args, f"  {c['fact']}: {c['status']} (n0={c['n0']}, n1={c.get('n1')})")
    return EXIT_OK if ok else EXIT_FAILED


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output file (default stdout)")
    common.add_argument("--quiet", action="store_true", help="suppress the human-readable summary")

    p = argparse.ArgumentParser(prog="pa-embed", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("axioms", parents=[common], help="test the 15 PA⁻ axioms on samples")
    s.add_argument("--model", choices=["nat", "poly"], required=True)
    s.add_argument("--samples", type=_nonneg, default=1000)
    s.add_argument("--seed", type=int, required=True)
    s.set_defaults(func=cmd_axioms)

    s = sub.add_parser("solve", parents=[common], help="least solution of an equation system in a box")
    s.add_argument("--system", required=True, help="JSON list of equations")
    s.add_argument("--bound", type=_nonneg, required=True)
    s.add_argument("--node-limit", type=_nonneg, default=10**7)
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("embed", parents=[common], help="build a solution table for ℤ[X]⁺ elements")
    s.add_argument("--model", default="poly")
    s.add_argument("--elements", required=True, help="JSON list of polynomials")
    s.add_argument("--depth", type=_nonneg, required=True)
    s.add_argument("--budget", type=_nonneg, required=True, help="number of equations in the stream")
    s.add_argument("--schedule", choices=sorted(SCHEDULES), default="square")
    s.add_argument("--sort", action="store_true", help="reorder elements by degree, then coefficients")
    s.set_defaults(func=cmd_embed)

    s = sub.add_parser("verify", parents=[common], help="certify facts, order and injectivity of a table")
    s.add_argument("table")
    s.add_argument("--bound", type=_nonneg, default=1000, help="bound for the nonstandard-column check")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("render-table", parents=[common], help="print a solution table")
    s.add_argument("table")
    s.add_argument("--csv", action="store_true")
    s.add_argument("--max-rows", type=_nonneg)
    s.set_defaults(func=cmd_render_table)

    s = sub.add_parser("ufamily", parents=[common], help="the sets u(α, n)")
    s.add_argument("--alpha", required=True)
    s.add_argument("--n-max", type=_nonneg, default=64)
    s.add_argument("--check", action="store_true", help="check the coherence clauses")
    s.add_argument("--horizon", type=_nonneg, default=DEFAULT_HORIZON)
    s.set_defaults(func=cmd_ufamily)

    s = sub.add_parser("budget", parents=[common], help="the formula-length budget g(n, m)")
    s.add_argument("--n", type=_nonneg, required=True)
    s.add_argument("--m", type=_nonneg, required=True)
    s.add_argument("--cap", type=_nonneg)
    s.add_argument("--limit", type=_nonneg, default=10**7, help="enumeration limit for h")
    s.set_defaults(func=cmd_budget)

    s = sub.add_parser("star", parents=[common], help="componentwise witnesses over an ordinal index set")
    s.add_argument("--index", required=True, help='comma-separated ordinals, e.g. "0,1,2,w,w+1"')
    s.add_argument("--assign", required=True, help="JSON list or {ordinal: polynomial} map")
    s.add_argument("--n-max", type=_nonneg, default=20)
    s.add_argument("--cap", type=_nonneg, default=12)
    s.add_argument("--family", default="tails")
    s.add_argument("--horizon", type=_nonneg, default=DEFAULT_HORIZON)
    s.add_argument("--witness-limit", type=_nonneg, default=10_000)
    s.add_argument("--box", type=_nonneg, default=64)
    s.set_defaults(func=cmd_star)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return args.func(args)
    except (UsageError, ValueError, ParseError, KeyError, SearchLimitExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
