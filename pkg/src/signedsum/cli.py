"""Command-line interface.

Subcommands: eval (closed forms for one cell, oracles on request), verify
(theorem/conjecture checkers from the fixed registry), scan (parameter sweeps
streamed to table/JSONL/CSV), probe (randomized upper-bound sampling).

Exit codes: 0 all pass/consistent, 1 theorem failure or conjecture
refutation, 2 usage error, 3 budget or I/O error.  The default evaluation
budget comes from the SIGNEDSUM_BUDGET environment variable when set.
"""

from __future__ import annotations

import argparse
import sys
import time
from contextlib import nullcontext
from pathlib import Path

from .cache import CacheIntegrityError, CacheLoadError, ResultCache
from .checks import CHECKS, CellSpec, CheckOptions, iter_run_cells
from .groups import ParameterError, parse_group
from .report import Reporter
from .search import (
    BUDGET_ENV,
    BudgetExceededError,
    Family,
    default_budget,
    sample_upper_bound,
)

_FAMILY_TOKENS = {f.value: f for f in Family if f is not Family.ZERO_ANCHORED}


def _parse_range(text: str, flag: str) -> tuple[int, int]:
    parts = text.split("..")
    try:
        if len(parts) == 1:
            lo = hi = int(parts[0])
        elif len(parts) == 2:
            lo, hi = int(parts[0]), int(parts[1])
        else:
            raise ValueError
    except ValueError:
        raise ParameterError(f"{flag}: expected an integer or a..b, got {text!r}")
    if lo > hi:
        raise ParameterError(f"{flag}: empty range {text!r} (use a..b with a <= b)")
    return lo, hi


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="signedsum",
        description="Sumsets and signed sumsets over finite abelian groups: "
        "closed forms, exhaustive oracles, and verification sweeps.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_io_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--out", type=Path, help="write the report to this path")
        p.add_argument(
            "--format",
            choices=["table", "jsonl", "csv"],
            default="table",
            help="report format (default table)",
        )
        p.add_argument("--cache", type=Path, help="JSONL oracle-result cache")
        p.add_argument(
            "--budget",
            type=int,
            help=f"max set evaluations per oracle run (default {BUDGET_ENV} or 10^9)",
        )
        p.add_argument("--jobs", type=int, default=1, help="worker processes")

    p_eval = sub.add_parser("eval", help="closed forms for one (group, m, h) cell")
    p_eval.add_argument("group", help='group literal, e.g. "Z9", "Z3xZ3", "Z5^2"')
    p_eval.add_argument("m", type=int)
    p_eval.add_argument("h", type=int)
    p_eval.add_argument(
        "--oracle", action="store_true", help="also run the exhaustive oracles"
    )
    p_eval.add_argument(
        "--family",
        choices=sorted(_FAMILY_TOKENS),
        default=Family.MINIMIZER.value,
        help="family for the signed oracle (default afamily)",
    )
    add_io_flags(p_eval)

    p_verify = sub.add_parser("verify", help="run a checker from the fixed registry")
    p_verify.add_argument(
        "check", choices=sorted(CHECKS), help="checker id"
    )
    p_verify.add_argument("--n-max", type=int, help="max group order for sweeps")
    p_verify.add_argument("--h-max", type=int, help="max fold")
    p_verify.add_argument("--m", help="fold range a..b override where applicable")
    p_verify.add_argument("--h", help="fold range a..b override")
    p_verify.add_argument("--p", type=int, help="prime for elementary-abelian checks")
    p_verify.add_argument("--r", type=int, default=2, help="rank for elementary checks")
    p_verify.add_argument("--p-max", type=int, help="max prime for formula sweeps")
    p_verify.add_argument("--r-max", type=int, help="max rank for formula sweeps")
    p_verify.add_argument("--m-cap", type=int, help="cap on m for formula sweeps")
    add_io_flags(p_verify)

    p_scan = sub.add_parser("scan", help="sweep a parameter grid")
    p_scan.add_argument("groups", help="comma-separated group literals")
    p_scan.add_argument("--m", help="size range a..b (default 1..|G|)")
    p_scan.add_argument("--h", default="2", help="fold range a..b (default 2)")
    p_scan.add_argument(
        "--family",
        choices=sorted(_FAMILY_TOKENS),
        default=Family.MINIMIZER.value,
        help="family for the signed oracle (default afamily)",
    )
    add_io_flags(p_scan)

    p_probe = sub.add_parser("probe", help="randomized signed-sumset upper bound")
    p_probe.add_argument("-g", "--group", required=True, help="group literal")
    p_probe.add_argument("--m", type=int, required=True)
    p_probe.add_argument("--h", type=int, required=True)
    p_probe.add_argument("--trials", type=int, default=1000)
    p_probe.add_argument("--seed", type=int, default=0)
    add_io_flags(p_probe)

    return parser


def _open_sink(args):
    if args.out is not None:
        return open(args.out, "w", encoding="utf-8")
    return nullcontext(sys.stdout)


def _effective_budget(args) -> int:
    return args.budget if args.budget is not None else default_budget()


def _cache(args) -> ResultCache | None:
    return ResultCache(args.cache) if args.cache is not None else None


def _cmd_eval(args) -> int:
    g = parse_group(args.group)
    budget = _effective_budget(args)
    family = _FAMILY_TOKENS[args.family]
    spec = CellSpec(
        g,
        args.m,
        args.h,
        want_plain=args.oracle,
        want_signed=args.oracle,
        family=family,
        budget=budget,
    )
    config = {
        "command": "eval",
        "group": g.literal(),
        "m": args.m,
        "h": args.h,
        "oracle": args.oracle,
        "family": family.value,
        "budget": budget,
    }
    t0 = time.perf_counter()
    cache = _cache(args)
    rows = list(iter_run_cells([spec], jobs=1, cache=cache))
    with _open_sink(args) as sink:
        reporter = Reporter(sink, args.format, config)
        for row in rows:
            reporter.result(row)
        reporter.finish()
    print(
        f"[signedsum] eval: 1 cell in {time.perf_counter() - t0:.2f}s",
        file=sys.stderr,
    )
    if args.oracle and rows[0].rho_oracle_skipped == "budget":
        raise BudgetExceededError("eval: oracle run exceeded the budget")
    return 0


def _cmd_verify(args) -> int:
    checker, _ = CHECKS[args.check]
    budget = _effective_budget(args)
    opts = CheckOptions(
        n_max=args.n_max,
        h_max=args.h_max,
        p=args.p,
        r=args.r,
        p_max=args.p_max,
        r_max=args.r_max,
        m_cap=args.m_cap,
        m_range=_parse_range(args.m, "--m") if args.m else None,
        h_range=_parse_range(args.h, "--h") if args.h else None,
        budget=budget,
        jobs=args.jobs,
        cache=_cache(args),
    )
    config = {
        "command": "verify",
        "check": args.check,
        "n_max": args.n_max,
        "h_max": args.h_max,
        "p": args.p,
        "r": args.r,
        "p_max": args.p_max,
        "r_max": args.r_max,
        "m_cap": args.m_cap,
        "m": args.m,
        "h": args.h,
        "budget": budget,
    }
    t0 = time.perf_counter()
    run = checker(opts)
    with _open_sink(args) as sink:
        reporter = Reporter(sink, args.format, config)
        for row in run.results:
            reporter.result(row)
        for verdict in run.verdicts:
            reporter.verdict(verdict)
        reporter.finish()
    print(
        f"[signedsum] verify {args.check}: {len(run.results)} cells, "
        f"{run.verdicts[-1]['status']} in {time.perf_counter() - t0:.2f}s",
        file=sys.stderr,
    )
    return 1 if run.failed else 0


def _cmd_scan(args) -> int:
    groups = [parse_group(tok) for tok in args.groups.split(",") if tok]
    if not groups:
        raise ParameterError("scan: no groups given")
    budget = _effective_budget(args)
    family = _FAMILY_TOKENS[args.family]
    m_range = _parse_range(args.m, "--m") if args.m else None
    h_range = _parse_range(args.h, "--h")
    cells = []
    for g in groups:
        lo, hi = m_range if m_range else (1, g.order)
        hi = min(hi, g.order)
        for m in range(lo, hi + 1):
            for h in range(h_range[0], h_range[1] + 1):
                cells.append(
                    CellSpec(g, m, h, family=family, budget=budget)
                )
    config = {
        "command": "scan",
        "groups": [g.literal() for g in groups],
        "m": list(m_range) if m_range else None,
        "h": list(h_range),
        "family": family.value,
        "budget": budget,
    }
    t0 = time.perf_counter()
    cache = _cache(args)
    with _open_sink(args) as sink:
        reporter = Reporter(sink, args.format, config)
        reporter.start()
        count = 0
        for row in iter_run_cells(cells, jobs=args.jobs, cache=cache):
            reporter.result(row)
            count += 1
        reporter.finish()
    print(
        f"[signedsum] scan: {count} cells in {time.perf_counter() - t0:.2f}s",
        file=sys.stderr,
    )
    return 0


def _cmd_probe(args) -> int:
    g = parse_group(args.group)
    t0 = time.perf_counter()
    value = sample_upper_bound(g, args.m, args.h, trials=args.trials, seed=args.seed)
    config = {
        "command": "probe",
        "group": g.literal(),
        "m": args.m,
        "h": args.h,
        "trials": args.trials,
        "seed": args.seed,
    }
    with _open_sink(args) as sink:
        if args.format == "jsonl":
            reporter = Reporter(sink, "jsonl", config)
            reporter.verdict(
                {"check": "probe", "cell": f"{g.literal()} m={args.m} h={args.h}",
                 "status": "upper-bound", "detail": str(value)}
            )
            reporter.finish()
        else:
            sink.write(
                f"group={g.literal()} m={args.m} h={args.h} trials={args.trials} "
                f"seed={args.seed} upper_bound={value}\n"
            )
    print(
        f"[signedsum] probe: done in {time.perf_counter() - t0:.2f}s",
        file=sys.stderr,
    )
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "eval":
            return _cmd_eval(args)
        if args.command == "verify":
            return _cmd_verify(args)
        if args.command == "scan":
            return _cmd_scan(args)
        if args.command == "probe":
            return _cmd_probe(args)
        parser.error(f"unknown command {args.command!r}")
    except (BudgetExceededError, OSError, CacheLoadError, CacheIntegrityError) as exc:
        print(f"signedsum: error: {exc}", file=sys.stderr)
        return 3
    except ParameterError as exc:
        print(f"signedsum: usage error: {exc}", file=sys.stderr)
        return 2
    return 2


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
