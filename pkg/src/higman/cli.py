"""Command-line front end: ``higman {relator,nf,gamma,expmap,selftest}``.

Exit codes: 0 success, 1 a checked property is false, 2 usage or
configuration error, 3 a resource cap was hit.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from pathlib import Path

from . import __version__
from .acceptance import AcceptanceRun
from .expmap import CapExceeded as SearchCapExceeded
from .expmap import brute_oracle, from_csv, search_best, to_csv, verify
from .gamma import CapExceeded, GammaGroup, check_relators, jacobson_check, zs_check
from .ncpoly import PolyError, format_poly, parse_poly
from .rewrite import Context, IterationCapExceeded, RewriteError, RuleSystem, ShapeMismatch
from .zmod import ZmodError, is_prime

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _context(args, nvars: int = 4) -> Context:
    return Context(args.p, args.n, args.k, nvars)


def _rules(args, ctx: Context) -> RuleSystem:
    if getattr(args, "corrupt", False):
        return RuleSystem.corrupted(ctx)
    return RuleSystem(ctx, getattr(args, "direction", "left"))


def _warnings(ctx: Context) -> list:
    if ctx.experimental:
        return ["p = 2 is experimental: the termination measure need not descend "
                "and rewriting may hit the iteration cap"]
    return []


# -- relator ---------------------------------------------------------------------

def cmd_relator(args) -> tuple:
    ctx = _context(args)
    try:
        rs = RuleSystem(ctx)
    except ShapeMismatch as exc:
        return False, {"shape_ok": False, "error": str(exc)}
    result = {
        "q0": format_poly(rs.relators.q0),
        "relators": [format_poly(g) for g in rs.relators.g],
        "alpha": list(rs.relators.alpha),
        "rules": [str(r) for r in rs.rules],
        "shape_ok": True,
        "warnings": _warnings(ctx),
    }
    return True, result


def _print_relator(result: dict) -> None:
    print(f"Q0(y) = {result['q0']}  (y = x0)")
    for i, g in enumerate(result.get("relators", [])):
        print(f"g{i} = {g}")
    for r in result.get("rules", []):
        print(f"rule: {r}")
    print(f"alpha = {result.get('alpha')}  shape ok: {result['shape_ok']}")


# -- nf --------------------------------------------------------------------------

def cmd_nf(args) -> tuple:
    ctx = _context(args, args.vars)
    rs = _rules(args, ctx)
    try:
        f = parse_poly(ctx.ring, args.poly)
    except PolyError as exc:
        raise UsageError(str(exc)) from exc
    rs.trace = []
    nf = rs.normal_form(f, args.strategy, random.Random(args.seed))
    trace = [list(t) for t in rs.trace]
    result = {
        "input": format_poly(f),
        "normal_form": format_poly(nf),
        "steps": rs.stats.steps,
        "violations": rs.stats.violations,
        "trace": trace[: args.trace_limit],
        "trace_truncated": len(trace) > args.trace_limit,
        "warnings": _warnings(ctx),
    }
    return True, result


def _print_nf(result: dict) -> None:
    print(result["normal_form"])
    print(f"steps: {result['steps']}  descent violations: {result['violations']}")
    if result["trace"]:
        shown = " ".join("(%d,%d,%d)" % tuple(t) for t in result["trace"])
        print(f"measure trace: {shown}{' ...' if result['trace_truncated'] else ''}")


# -- gamma -----------------------------------------------------------------------

def _gens(text: str | None, group: GammaGroup) -> list:
    all_gens = group.generators()
    if not text:
        return all_gens
    try:
        idx = [int(t) for t in text.split(",")]
    except ValueError as exc:
        raise UsageError(f"--gens expects indices like 0,2: {text!r}") from exc
    if any(not 0 <= i < len(all_gens) for i in idx):
        raise UsageError(f"--gens indices must lie in [0, {len(all_gens)})")
    return [all_gens[i] for i in idx]


def cmd_gamma(args) -> tuple:
    ctx = _context(args, args.vars)
    group = GammaGroup(rules=_rules(args, ctx))
    cap = args.cap or 10**6
    action = args.action
    if action == "relcheck":
        ok = check_relators(group)
        return ok, {"relations_hold": ok}
    if action == "enumerate":
        elements = group.enumerate(_gens(args.gens, group), cap)
        result = {"size": len(elements)}
        if args.dump:
            result["elements"] = sorted(format_poly(x.poly) for x in elements)
        return True, result
    if action == "zs-check":
        if ctx.nvars != 4:
            raise UsageError("zs-check needs the 4-variable system")
        rep = zs_check(group, cap)
        ok = (rep["intersection_trivial"] and rep["unique_factorization"]
              and rep["sizeG"] == rep["sizeS"] * rep["sizeT"])
        return ok, rep
    if action == "jacobson-check":
        rep = jacobson_check(group, cap)
        return rep["equal"], rep
    raise UsageError(f"unknown gamma action {action!r}")


def _print_gamma(result: dict) -> None:
    for key, value in result.items():
        if key == "elements":
            print("elements:")
            for e in value:
                print(f"  {e}")
        else:
            print(f"{key}: {value}")


# -- expmap ----------------------------------------------------------------------

def _prime_power(value: int, p: int | None) -> tuple:
    """(p, m) with p^m = value; ``p`` breaks the tie for value 1."""
    if value < 1:
        raise UsageError(f"modulus must be positive, got {value}")
    if value == 1:
        return p or 2, 0
    q = next(d for d in range(2, value + 1) if value % d == 0)
    m, rest = 0, value
    while rest % q == 0:
        rest //= q
        m += 1
    if rest != 1:
        raise UsageError(f"modulus {value} is not a prime power")
    return q, m


def _expmap_shape(args, rows: int | None = None) -> tuple:
    if args.modulus is not None:
        return _prime_power(args.modulus, args.p)
    if args.m is not None:
        if not is_prime(args.p):
            raise UsageError(f"p={args.p} is not prime")
        if args.m < 0:
            raise UsageError("m must be non-negative")
        return args.p, args.m
    if rows is not None:
        return _prime_power(rows, args.p)
    raise UsageError("give --modulus or --m")


def cmd_expmap(args) -> tuple:
    if args.action == "verify":
        if not args.table:
            raise UsageError("expmap verify needs --table CSV")
        text = Path(args.table).read_text()
        rows = sum(1 for line in text.splitlines()[1:] if line.strip())
        p, m = _expmap_shape(args, rows)
        try:
            f = from_csv(text, p, m, args.k)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        rep = verify(f)
        return rep.is_bijection and rep.four_periodic, rep.as_dict()
    p, m = _expmap_shape(args)
    if args.action == "oracle":
        best, witness = brute_oracle(p, m, args.k, cap=args.cap or 9)
        result = {"max_match": best, "witness": list(witness.table),
                  "report": verify(witness).as_dict()}
        f = witness
    elif args.action == "search":
        res = search_best(p, m, args.k, args.strategy, budget=args.budget, seed=args.seed)
        result = res.as_dict()
        result["table"] = list(res.function.table)
        f = res.function
    else:
        raise UsageError(f"unknown expmap action {args.action!r}")
    if args.out:
        Path(args.out).write_text(to_csv(f))
        result["written"] = args.out
    return True, result


def _print_expmap(result: dict) -> None:
    report = result.get("report", result)
    for key in ("strategy", "modulus", "nodes", "complete", "budget_exceeded", "max_match"):
        if key in result:
            print(f"{key}: {result[key]}")
    for key, value in report.items():
        print(f"{key}: {value}")
    table = result.get("table") or result.get("witness")
    if table is not None:
        print("f = " + " ".join(map(str, table)))
    if "written" in result:
        print(f"table written to {result['written']}")


# -- selftest --------------------------------------------------------------------

def _criteria_numbers(text: str | None) -> set | None:
    if not text:
        return None
    try:
        return {int(t) for t in text.split(",")}
    except ValueError as exc:
        raise UsageError(f"--criteria expects numbers like 1,2,5: {text!r}") from exc


def cmd_selftest(args) -> tuple:
    run = AcceptanceRun(args.seed)
    methods = [run.relator_soundness, run.unit_exponent, run.confluence, run.termination,
               run.linearity, run.ideal_membership, run.zappa_szep, run.word_level,
               run.magnus_jacobson, run.exp_bijections]
    wanted = _criteria_numbers(args.criteria)
    criteria = [fn() for i, fn in enumerate(methods, 1) if wanted is None or i in wanted]
    for c in criteria:
        c.passed = c.passed and (c.limit is None or c.seconds < c.limit)

    control_ctx = Context(3, 3, 4)
    control_rejected = not check_relators(GammaGroup(rules=RuleSystem.corrupted(control_ctx)))

    ctx = _context(args)
    warnings = _warnings(ctx)
    if ctx.experimental:
        rs = RuleSystem(ctx, max_steps=200_000)
        rng = random.Random(args.seed)
        capped = 0
        for _ in range(20):
            m = tuple(rng.randrange(4) for _ in range(rng.randint(2, 4)))
            try:
                rs.normal_form(ctx.ring.monomial(m))
            except IterationCapExceeded:
                capped += 1
        warnings.append(f"at {ctx.p},{ctx.k},{ctx.n}: {rs.stats.violations} descent "
                        f"violations, {capped}/20 samples hit the iteration cap")

    items = [c.as_dict() for c in criteria]
    if args.reproducible:
        for item in items:
            item["seconds"] = None
    result = {
        "criteria": items,
        "negative_control_rejected": control_rejected,
        "warnings": warnings,
        "lines": [c.line() for c in criteria],
    }
    ok = all(c.passed for c in criteria) and control_rejected
    return ok, result


def _print_selftest(result: dict) -> None:
    for item in result["criteria"]:
        status = "PASS" if item["passed"] else "FAIL"
        secs = "" if item["seconds"] is None else f" {item['seconds']:.2f}s"
        print(f"[{status}] {item['number']:2d}. {item['name']}{secs}")
    status = "PASS" if result["negative_control_rejected"] else "FAIL"
    print(f"[{status}] corrupted rule set rejected by relcheck")


COMMANDS = {
    "relator": (cmd_relator, _print_relator),
    "nf": (cmd_nf, _print_nf),
    "gamma": (cmd_gamma, _print_gamma),
    "expmap": (cmd_expmap, _print_expmap),
    "selftest": (cmd_selftest, _print_selftest),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, default=3, help="prime p (default 3)")
    common.add_argument("--n", type=int, default=2, help="exponent n of the modulus p^n")
    common.add_argument("--k", type=int, default=4, help="Higman parameter k, p | k-1")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("human", "json"), default="human")
    common.add_argument("--cap", type=int, default=None, help="enumeration / oracle size cap")
    common.add_argument("--budget", default=None, help="search budget: node count or e.g. 10s")
    common.add_argument("--reproducible", action="store_true",
                        help="omit timings so identical runs give identical output")

    parser = argparse.ArgumentParser(prog="higman", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("relator", parents=[common], help="print Q0, the relators and the rules")

    nf = sub.add_parser("nf", parents=[common], help="normal form of a polynomial")
    nf.add_argument("poly", help='polynomial, e.g. "x1.x0" or "2*x0 + x1.x1"')
    nf.add_argument("--vars", type=int, choices=(2, 4), default=4)
    nf.add_argument("--direction", choices=("left", "right"), default="left")
    nf.add_argument("--strategy", choices=("canonical", "random", "cached"), default="canonical")
    nf.add_argument("--trace-limit", type=int, default=50)
    nf.add_argument("--corrupt", action="store_true", help=argparse.SUPPRESS)

    gamma = sub.add_parser("gamma", parents=[common], help="group checks in the quotient")
    gamma.add_argument("action", choices=("enumerate", "zs-check", "jacobson-check", "relcheck"))
    gamma.add_argument("--gens", default=None, help="generator indices, e.g. 0,2")
    gamma.add_argument("--vars", type=int, choices=(2, 4), default=4)
    gamma.add_argument("--corrupt", action="store_true",
                       help="use the sign-flipped rule set (negative control)")
    gamma.add_argument("--dump", action="store_true", help="list enumerated elements")

    expmap = sub.add_parser("expmap", parents=[common], help="bijections with f^4 = id")
    expmap.add_argument("action", choices=("search", "verify", "oracle"))
    expmap.add_argument("--modulus", type=int, default=None, help="p^m, e.g. 27")
    expmap.add_argument("--m", type=int, default=None)
    expmap.add_argument("--strategy", choices=("exhaustive", "backtrack", "block_ansatz"),
                        default="backtrack")
    expmap.add_argument("--table", default=None, help="CSV table (x, f(x)) to verify")
    expmap.add_argument("--out", default=None, help="write the found table as CSV")

    selftest = sub.add_parser("selftest", parents=[common], help="run the acceptance suite")
    selftest.add_argument("--criteria", default=None, help="subset, e.g. 1,2,5")
    return parser


def _config(args) -> dict:
    skip = {"command", "format", "reproducible", "seed"}
    return {key: value for key, value in sorted(vars(args).items()) if key not in skip}


def main(argv: list | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    run, show = COMMANDS[args.command]
    start = time.perf_counter()
    try:
        ok, result = run(args)
        code = EXIT_OK if ok else EXIT_FAIL
    except (UsageError, ZmodError, PolyError, ValueError, OSError) as exc:
        print(f"higman: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (CapExceeded, SearchCapExceeded, IterationCapExceeded) as exc:
        print(f"higman: resource cap: {exc}", file=sys.stderr)
        return EXIT_CAP
    except RewriteError as exc:
        print(f"higman: error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    elapsed = time.perf_counter() - start

    if args.format == "json":
        report = {
            "tool": "higman",
            "tool_version": __version__,
            "command": args.command,
            "config": _config(args),
            "seed": args.seed,
            "ok": ok,
            "result": result,
            "timings": None if args.reproducible else {"seconds": round(elapsed, 3)},
        }
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        print(f"# higman {__version__} {args.command} seed={args.seed}")
        show(result)
        for w in result.get("warnings", []):
            print(f"warning: {w}")
        if not args.reproducible:
            print(f"# {elapsed:.2f}s")
    return code


if __name__ == "__main__":
    sys.exit(main())
