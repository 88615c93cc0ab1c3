"""Command-line front end.

Commands: gen, solve, report, sweep, check-harmonic.  Exit codes: 0 on
success, 1 for usage problems, 2 for unreadable or inconsistent data, 3
when an input exceeds an exact-method size limit.  All artifacts are
deterministic functions of the flags, byte for byte.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .bounds import BoundReport, build_report, harmonic_vs_log
from .heuristics import HEURISTICS
from .instance import Instance, InstanceError
from .oracle import UnsupportedSizeError, optimum
from .trace import StepError, TraceMismatchError, validate_trace
from .tsplib import (
    TraceJsonError,
    TsplibError,
    emit_euc2d,
    emit_tsplib,
    gen_random_euclidean,
    gen_random_euclidean_points,
    gen_random_metric,
    parse_tsplib,
    report_csv_header,
    report_to_csv_row,
    report_to_json,
    trace_from_json,
    trace_to_json,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_LIMIT = 3

SWEEP_MIN_N = 5
SWEEP_MAX_N = 20
_TABLE_ROW_CAP = 200

_DATA_ERRORS = (
    TsplibError,
    TraceJsonError,
    InstanceError,
    StepError,
    TraceMismatchError,
    OSError,
    UnicodeDecodeError,
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tourbench", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="write a seeded random instance file")
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--seed", type=int, required=True)
    gen.add_argument("--kind", choices=("euclidean", "metric"), required=True)
    gen.add_argument("--out", required=True)

    solve = sub.add_parser("solve", help="run a heuristic and write its trace")
    solve.add_argument("--heuristic", choices=tuple(HEURISTICS), required=True)
    solve.add_argument("--instance", required=True)
    solve.add_argument("--start", default=None, help="nn start vertex, or 'all'")
    solve.add_argument("--trace-out", required=True)

    report = sub.add_parser("report", help="compare a trace against the exact optimum")
    report.add_argument("--trace", required=True)
    report.add_argument("--instance", required=True)
    report.add_argument("--format", choices=("json", "csv"), default="json")

    sweep = sub.add_parser("sweep", help="batch seeded instances into a CSV of reports")
    sweep.add_argument("--n-min", type=int, required=True)
    sweep.add_argument("--n-max", type=int, required=True)
    sweep.add_argument("--count", type=int, required=True)
    sweep.add_argument("--seed", type=int, required=True)
    sweep.add_argument("--heuristic", choices=tuple(HEURISTICS), required=True)
    sweep.add_argument("--csv-out", required=True)
    sweep.add_argument("--kind", choices=("euclidean", "metric"), default="euclidean")
    sweep.add_argument("--jobs", type=int, default=1)
    sweep.add_argument(
        "--allow-small",
        action="store_true",
        help="permit n below 5, where the growth-chain summary is not applicable",
    )

    check = sub.add_parser("check-harmonic", help="compare H_n against log2(n)")
    check.add_argument("--n-max", type=int, required=True)
    return parser


def _read_instance(path: str) -> Instance:
    return parse_tsplib(Path(path).read_text())


def _cmd_gen(args: argparse.Namespace) -> int:
    if args.n < 3:
        raise UsageError(f"--n must be at least 3, got {args.n}")
    if args.kind == "euclidean":
        pts = gen_random_euclidean_points(args.n, args.seed)
        text = emit_euc2d(pts, name=f"euc-n{args.n}-s{args.seed}")
        name = f"euc-n{args.n}-s{args.seed}"
    else:
        inst = gen_random_metric(args.n, args.seed)
        text = emit_tsplib(inst)
        name = inst.name
    Path(args.out).write_text(text)
    print(f"{args.out}: name={name} n={args.n}")
    return EXIT_OK


def _solve_one(inst: Instance, heuristic: str, start: int):
    if heuristic == "nn":
        return HEURISTICS[heuristic](inst, start=start)
    return HEURISTICS[heuristic](inst)


def _cmd_solve(args: argparse.Namespace) -> int:
    if args.start is not None and args.heuristic != "nn":
        raise UsageError("--start only applies to the nn heuristic")
    inst = _read_instance(args.instance)
    if args.start == "all":
        # Try every start, report each weight, keep the best trace.
        best = None
        for s in range(inst.n):
            t = _solve_one(inst, args.heuristic, s)
            print(f"start {s}: final_weight {t.final_weight}")
            if best is None or t.final_weight < best[0]:
                best = (t.final_weight, s, t)
        assert best is not None
        trace = best[2]
        print(f"best start: {best[1]}")
    else:
        start = 0
        if args.start is not None:
            try:
                start = int(args.start)
            except ValueError:
                raise UsageError(f"--start must be an integer or 'all', got {args.start!r}")
        if not 0 <= start < inst.n:
            raise InstanceError(f"start vertex {start} out of range for n={inst.n}")
        trace = _solve_one(inst, args.heuristic, start)
    violations = validate_trace(trace, inst)
    if violations:  # internal invariant; heuristic traces always audit clean
        raise RuntimeError(f"produced an inconsistent trace: {violations[0]}")
    Path(args.trace_out).write_text(trace_to_json(trace) + "\n")
    print(f"{trace.heuristic} on {trace.instance_name}: final_weight {trace.final_weight}")
    return EXIT_OK


def _cmd_report(args: argparse.Namespace) -> int:
    inst = _read_instance(args.instance)
    trace = trace_from_json(Path(args.trace).read_text())
    violations = validate_trace(trace, inst)
    if violations:
        for v in violations:
            print(f"trace violation: {v}", file=sys.stderr)
        return EXIT_DATA
    rep = build_report(trace, optimum(inst))
    if args.format == "json":
        print(report_to_json(rep))
    else:
        print(report_csv_header())
        print(report_to_csv_row(rep))
    return EXIT_OK


@dataclass(frozen=True)
class SweepJob:
    n: int
    index: int
    seed: int
    kind: str
    heuristic: str


def _child_seed(master: int, n: int, index: int) -> int:
    # Readable derived seeds; distinct per (n, index) within one sweep.
    return master * 1_000_000 + n * 1_000 + index


def _run_job(job: SweepJob) -> BoundReport:
    gen = gen_random_euclidean if job.kind == "euclidean" else gen_random_metric
    inst = gen(job.n, job.seed)
    trace = _solve_one(inst, job.heuristic, start=0)
    return build_report(trace, optimum(inst))


def run_sweep(
    n_min: int,
    n_max: int,
    count: int,
    seed: int,
    heuristic: str,
    kind: str = "euclidean",
    jobs: int = 1,
) -> tuple[list[BoundReport], str]:
    """Generate count instances per size and report each heuristic run.

    Rows come back in (size, index) order regardless of how many worker
    processes computed them.  Returns the reports and the summary line.
    """
    plan = [
        SweepJob(n=n, index=i, seed=_child_seed(seed, n, i), kind=kind, heuristic=heuristic)
        for n in range(n_min, n_max + 1)
        for i in range(count)
    ]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(_run_job, plan))
    else:
        reports = [_run_job(job) for job in plan]
    total = len(reports)
    pr_ok = sum(1 for r in reports if r.pr_holds)
    log_ok = sum(1 for r in reports if r.thelog_holds)
    max_ratio = max(float(r.ratio) for r in reports if r.ratio is not None)
    summary = f"pr_holds={pr_ok}/{total} thelog_holds={log_ok}/{total} max_ratio={max_ratio!r}"
    return reports, summary


def _cmd_sweep(args: argparse.Namespace) -> int:
    floor = 3 if args.allow_small else SWEEP_MIN_N
    if args.n_min < floor:
        raise UsageError(
            f"--n-min must be at least {floor}"
            + ("" if args.allow_small else " (use --allow-small to go lower)")
        )
    if args.n_min > args.n_max:
        raise UsageError("--n-min cannot exceed --n-max")
    if args.n_max > SWEEP_MAX_N:
        raise UsageError(f"--n-max cannot exceed {SWEEP_MAX_N} (exact-oracle limit)")
    if args.count < 1:
        raise UsageError("--count must be at least 1")
    if args.jobs < 1:
        raise UsageError("--jobs must be at least 1")
    reports, summary = run_sweep(
        args.n_min, args.n_max, args.count, args.seed, args.heuristic, args.kind, args.jobs
    )
    lines = [report_csv_header()]
    lines.extend(report_to_csv_row(r) for r in reports)
    Path(args.csv_out).write_text("\n".join(lines) + "\n")
    print(summary)
    return EXIT_OK


def _cmd_check_harmonic(args: argparse.Namespace) -> int:
    if args.n_max < 1:
        raise UsageError(f"--n-max must be at least 1, got {args.n_max}")
    sweep = harmonic_vs_log(args.n_max)
    print(f"{'n':>8}  {'H_n':>16}  {'log2(n)':>16}  verdict")
    if args.n_max <= _TABLE_ROW_CAP:
        shown = sweep.rows()
    else:
        shown = (sweep.row(n) for n in range(1, 11))
    for n, h, l, ok in shown:
        print(f"{n:>8}  {h:>16.12f}  {l:>16.12f}  {'ok' if ok else 'FAIL'}")
    if args.n_max > _TABLE_ROW_CAP:
        print(f"... ({args.n_max - 10} rows omitted)")
        for n in sweep.failures:
            if n > 10:
                _, h, l, _ = sweep.row(n)
                print(f"{n:>8}  {h:>16.12f}  {l:>16.12f}  FAIL")
    failures = ", ".join(str(n) for n in sweep.failures) or "none"
    print(f"failures: {failures} (checked 1..{args.n_max})")
    return EXIT_OK


_COMMANDS = {
    "gen": _cmd_gen,
    "solve": _cmd_solve,
    "report": _cmd_report,
    "sweep": _cmd_sweep,
    "check-harmonic": _cmd_check_harmonic,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UnsupportedSizeError as exc:
        print(f"limit error: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except json.JSONDecodeError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except _DATA_ERRORS as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA


def run() -> None:
    sys.exit(main())
