"""Command-line interface.

Exit codes: 0 when every record completed (honest negative verdicts
included), 2 when any analysis errored or a replay check failed, 3
when the scenario file or replay id could not be understood.
"""

from __future__ import annotations

import argparse
import sys
import time
from concurrent.futures import ThreadPoolExecutor

from .errors import ScenarioError, SkewlabError, UnknownExample
from .pilab import REPLAY_DEFAULTS, replay
from .reports import Report, render_report
from .scenario import execute_run, load_scenario, runs_for_family

_SCENARIO_COMMANDS = ("validate", "decompose", "center", "pi-search", "pipeline")


def _common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0, help="seed for sampled checks")
    p.add_argument(
        "--budget",
        type=int,
        default=None,
        help="default evaluation budget for searches",
    )
    p.add_argument(
        "--format",
        choices=("text", "json"),
        default="text",
        dest="fmt",
        help="output format (json is canonical and timing-free)",
    )
    p.add_argument("--out", default=None, help="write the report here instead of stdout")
    p.add_argument(
        "--figures",
        default=None,
        metavar="DIR",
        help="also render PNG figures into DIR",
    )
    p.add_argument(
        "--parallel",
        action="store_true",
        help="execute runs in a thread pool (order of records is preserved)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="skewlab",
        description="exact checks for skew polynomial rings over a small ring catalog",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "validate": "check twist laws for every twist a scenario declares",
        "decompose": "orbit decompositions and kernel chains",
        "center": "centrality, semi-invariance, quasi-algebraicity, udim",
        "pi-search": "hunt for identity counterexamples",
        "pipeline": "the full bounded decision pipeline",
    }
    for cmd in _SCENARIO_COMMANDS:
        p = sub.add_parser(cmd, help=helps[cmd])
        p.add_argument("scenario", help="path to a scenario JSON file")
        _common_flags(p)
    pr = sub.add_parser("replay", help="re-run a named worked example")
    pr.add_argument(
        "example",
        help="example id such as ex-4.8-truncated-shift(2), or 'all'",
    )
    _common_flags(pr)
    return parser


def _execute_all(fn, items, parallel: bool) -> list:
    if parallel and len(items) > 1:
        with ThreadPoolExecutor(max_workers=min(8, len(items))) as pool:
            return list(pool.map(fn, items))
    return [fn(it) for it in items]


def _deliver(report: Report, args, elapsed: float) -> int:
    text = render_report(report, args.fmt, elapsed=elapsed if args.fmt == "text" else None)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.figures:
        from .figures import render_figures

        paths = render_figures(report, args.figures)
        print(f"figures: {len(paths)} written to {args.figures}", file=sys.stderr)
    return report.exit_code()


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    t0 = time.monotonic()

    if args.command == "replay":
        ids = REPLAY_DEFAULTS if args.example == "all" else [args.example]

        def one(rid: str) -> dict:
            try:
                rep = replay(rid, seed=args.seed)
            except UnknownExample:
                raise
            except SkewlabError as e:
                return {
                    "example": rid,
                    "status": "error",
                    "error": type(e).__name__,
                    "message": str(e),
                }
            rec = rep.as_dict()
            rec["status"] = "ok" if rep.passed else "failed"
            return rec

        try:
            records = _execute_all(one, ids, args.parallel)
        except UnknownExample as e:
            print(f"error: {e}", file=sys.stderr)
            return 3
        report = Report(
            command="replay",
            scenario=args.example,
            seed=args.seed,
            records=records,
        )
        return _deliver(report, args, time.monotonic() - t0)

    try:
        sc = load_scenario(args.scenario)
        runs = runs_for_family(sc, args.command)
    except ScenarioError as e:
        print(f"error: {e}", file=sys.stderr)
        return 3

    records = _execute_all(
        lambda run: execute_run(sc, run, seed=args.seed, budget=args.budget),
        runs,
        args.parallel,
    )
    report = Report(
        command=args.command,
        scenario=sc.name,
        seed=args.seed,
        records=records,
    )
    return _deliver(report, args, time.monotonic() - t0)


if __name__ == "__main__":
    sys.exit(main())
