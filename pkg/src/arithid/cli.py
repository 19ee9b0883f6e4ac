"""Command-line entry point: ``arithid {eval,verify,bench,list}``.

Exit codes: 0 success, 1 identity violation, 2 usage or domain error,
3 numeric guard tripped (residual guard or overflow).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Optional, Sequence

from . import bench as bench_mod
from . import evaluators as ev
from . import reference as ref
from .errors import DegenerateDomain, NumericGuardError, UnknownIdentity, UnknownTarget
from .exact import factorize
from .registry import list_identities
from .verify import (
    RangeConfig,
    report_to_csv,
    report_to_json,
    report_to_text,
    verify_all,
)

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_GUARD = 0, 1, 2, 3

METHODS = {
    "phi": ("definition", "factored") + ev.PHI_METHODS,
    "tau": ("definition", "factored") + ev.TAU_FORMS,
    "mu": ("factored", "expsum"),
    "pillai": ("definition",) + ev.PILLAI_FORMS,
    "jordan": ("factored",),
    "mertens": ("sieve",),
}


class UsageError(Exception):
    pass


def _evaluate(fn: str, n: int, method: Optional[str], k: Optional[int]):
    methods = METHODS[fn]
    method = method or methods[0]
    if method not in methods:
        raise UsageError(f"{fn} has no method {method!r}; choose from {', '.join(methods)}")
    if n < 1:
        raise DegenerateDomain(n, f"{fn}/{method}", "requires n >= 1")
    if fn == "jordan":
        if k is None:
            raise UsageError("jordan needs --k")
        return ref.jordan(k, factorize(n))
    if k is not None:
        raise UsageError("--k only applies to jordan")
    if fn == "phi":
        if method == "definition":
            return ref.phi_definition(n)
        if method == "factored":
            return ref.phi_factored(factorize(n))
        return ev.phi_paper(n, method)
    if fn == "tau":
        if method == "definition":
            return ref.tau_definition(n)
        if method == "factored":
            return ref.tau_factored(factorize(n))
        return ev.tau_paper(n, method)
    if fn == "mu":
        return ref.mu(factorize(n)) if method == "factored" else ev.mobius_identity_lhs(n, "expsum")
    if fn == "pillai":
        return ref.pillai_definition(n) if method == "definition" else ev.pillai_paper(n, method)
    return ref.mertens(n)


def _format_value(v) -> str:
    if isinstance(v, ev.ApproxInteger):
        return f"{v.nearest} (raw={v.raw!r}, residual={v.residual:.3g})"
    return str(v)


def _write(text: str, out: Optional[str], summary: str) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(summary)
    else:
        sys.stdout.write(text)


def _split(value: Optional[str]) -> list[str]:
    return [v.strip() for v in value.split(",") if v.strip()] if value else []


def cmd_eval(args) -> int:
    print(_format_value(_evaluate(args.fn, args.n, args.method, args.k)))
    return EXIT_OK


def cmd_verify(args) -> int:
    cfg = RangeConfig(
        max_n=args.max_n,
        max_pair=args.max_pair,
        k_multiplier=args.k_multiplier,
        fail_fast=args.fail_fast,
        workers=args.workers,
    )
    ids = None if args.all else _split(args.id) or None
    report = verify_all(cfg, ids=ids)
    render = {"text": report_to_text, "json": report_to_json, "csv": report_to_csv}[args.format]
    failed = sum(r.failed for r in report.identities)
    summary = (
        f"verdict: {report.verdict} ({len(report.identities)} identities, "
        f"{failed} failures) -> {args.out}"
    )
    _write(render(report), args.out, summary)
    if report.verdict == "pass":
        return EXIT_OK
    return EXIT_GUARD if report.guard_tripped else EXIT_VIOLATION


def cmd_bench(args) -> int:
    targets = _split(args.id) or ["I3"]
    try:
        grid = [int(x) for x in _split(args.ns)]
    except ValueError:
        raise UsageError(f"--ns expects comma-separated integers, got {args.ns!r}") from None
    records = bench_mod.bench(targets, grid, args.reps)
    _write(bench_mod.records_to_csv(records), args.out, f"{len(records)} records -> {args.out}")
    return EXIT_OK


def cmd_list(args) -> int:
    rows = list_identities()
    if args.format == "json":
        text = json.dumps(rows, indent=2, ensure_ascii=False) + "\n"
    elif args.format == "csv":
        buf = io.StringIO()
        fields = ["id", "name", "anchor", "arity", "domain", "mode", "cost_class", "evaluator", "note"]
        w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
        w.writeheader()
        for row in rows:
            w.writerow({f: row.get(f, "") for f in fields})
        text = buf.getvalue()
    else:
        text = "".join(
            f"{r['id']:<4} {r['name']:<24} {r['mode']:<8} {r['cost_class']:<9} {r['domain']}\n"
            f"     {r['anchor']}\n"
            for r in rows
        )
    sys.stdout.write(text)
    return EXIT_OK


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="arithid", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("eval", help="evaluate one arithmetic function")
    e.add_argument("fn", choices=sorted(METHODS))
    e.add_argument("n", type=int)
    e.add_argument("--method", help="formula to use; default is the plain definition")
    e.add_argument("--k", type=_positive, help="Jordan totient order")
    e.set_defaults(func=cmd_eval)

    v = sub.add_parser("verify", help="sweep identities against their oracles")
    sel = v.add_mutually_exclusive_group()
    sel.add_argument("--id", help="comma-separated identity ids, e.g. I3,I6")
    sel.add_argument("--all", action="store_true", help="every identity (the default)")
    v.add_argument("--max-n", type=int, help="cap n for every identity (default: per cost class)")
    v.add_argument("--max-pair", type=int, default=200, help="m, n bound for pair identities")
    v.add_argument("--k-multiplier", type=int, default=3, help="k runs to this multiple of n for I1, I7")
    v.add_argument("--format", choices=("text", "json", "csv"), default="text")
    v.add_argument("--out", help="write the report here and print a one-line summary")
    v.add_argument("--fail-fast", action="store_true", help="stop after the first failing identity")
    v.add_argument("--workers", type=_positive, default=1, help="worker processes; output does not depend on it")
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bench", help="time evaluators over an n grid")
    b.add_argument("--id", help="comma-separated targets (identity ids or function names)")
    b.add_argument("--ns", default="250,500,1000,2000", help="strictly increasing n grid")
    b.add_argument("--reps", type=int, default=5, help="timed repetitions per point (>= 3)")
    b.add_argument("--out", help="write CSV here instead of stdout")
    b.set_defaults(func=cmd_bench)

    ls = sub.add_parser("list", help="list the identity registry")
    ls.add_argument("--format", choices=("text", "json", "csv"), default="text")
    ls.set_defaults(func=cmd_list)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NumericGuardError as exc:
        print(f"arithid: numeric guard: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (UsageError, DegenerateDomain, UnknownIdentity, UnknownTarget, ValueError) as exc:
        print(f"arithid: error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return EXIT_USAGE


def run_cli(argv: Optional[Sequence[str]] = None) -> int:
    """Run the CLI and return its exit code (argparse's own exits included)."""
    try:
        return main(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
