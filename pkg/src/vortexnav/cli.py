"""Command-line interface: ``vortexnav {run,bench,plot,demo}``.

Exit codes: 0 success, 1 usage error, 2 runtime failure.
"""
from __future__ import annotations

import argparse
import os
import sys
from typing import Optional, Sequence

from .metrics import compare_methods, run_metrics
from .scenario_io import CONTROLLER_ALIASES, ScenarioError, read_scenario
from .scenarios import DEMOS, fig4
from .simulation import SimConfig, SimResult, run
from .svg import SvgStyle, write_svg
from .trajectory_io import read_csv, write_csv

EXIT_OK, EXIT_USAGE, EXIT_FAILURE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse would exit with status 2
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _parser() -> argparse.ArgumentParser:
    p = _Parser(prog="vortexnav", description="Opinion-driven vortex-field social navigation simulator.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    r = sub.add_parser("run", help="simulate one scenario file")
    r.add_argument("--scenario", required=True, help="YAML scenario file")
    r.add_argument("--controller", choices=sorted(CONTROLLER_ALIASES), help="override the file's controller")
    r.add_argument("--csv", help="write the trajectory log as CSV")
    r.add_argument("--svg", help="write an SVG figure")

    b = sub.add_parser("bench", help="compare the three controllers on seeded random encounters")
    b.add_argument("--trials", type=int, default=10)
    b.add_argument("--seed", type=int, default=42)
    b.add_argument("--report", help="directory for summary/trial CSVs and the comparison figure")
    b.add_argument("--workers", type=int, default=1, help="parallel worker processes")

    pl = sub.add_parser("plot", help="render a trajectory CSV as SVG")
    pl.add_argument("csv")
    pl.add_argument("--svg", required=True)

    d = sub.add_parser("demo", help="built-in encounter scenarios")
    d.add_argument("name", choices=sorted(DEMOS))
    d.add_argument("--out", default=".", help="output directory for SVG (and CSV) files")
    d.add_argument("--csv", action="store_true", help="also write trajectory CSVs")
    return p


def _summary(name: str, result: SimResult) -> str:
    m = run_metrics(result.log)
    parts = [f"{name}: {result.termination} at t={result.log.t[-1]:.2f} s", f"path {m.path_length:.3f} m"]
    if m.percent_increase is not None:
        parts.append(f"increase {m.percent_increase:.3f}%")
    if m.min_human_distance is not None:
        parts.append(f"min distance {m.min_human_distance:.3f} m")
    if result.log.robots and len(result.log.robots) > 1:
        a, b = result.log.robots[:2]
        d = min(((xa - xb) ** 2 + (ya - yb) ** 2) ** 0.5 for xa, ya, xb, yb in zip(a.x, a.y, b.x, b.y))
        parts.append(f"min robot distance {d:.3f} m")
    return ", ".join(parts)


def _cmd_run(args) -> int:
    spec, sim = read_scenario(args.scenario)
    if args.controller:
        spec = spec.with_controller(CONTROLLER_ALIASES[args.controller])
    result = run(spec, sim)
    print(_summary(spec.name or os.path.basename(args.scenario), result))
    if args.csv:
        write_csv(result.log, args.csv)
    if args.svg:
        write_svg(result.log, args.svg, SvgStyle(oval=spec.oval, title=spec.name))
    return EXIT_OK


def _cmd_bench(args) -> int:
    if args.trials < 1:
        raise UsageError("vortexnav bench: error: --trials must be >= 1")
    from .report import format_table, write_report

    table = compare_methods(args.trials, args.seed, workers=max(1, args.workers))
    sys.stdout.write(format_table(table))
    if args.report:
        for p in write_report(table, args.report):
            print(f"wrote {p}")
    return EXIT_OK


def _cmd_plot(args) -> int:
    log = read_csv(args.csv)
    write_svg(log, args.svg)
    return EXIT_OK


def _cmd_demo(args) -> int:
    os.makedirs(args.out, exist_ok=True)
    sim = SimConfig()
    if args.name == "fig4":
        runs = [(f"fig4_{alias}", fig4(kind)) for alias, kind in CONTROLLER_ALIASES.items()]
    else:
        runs = [(args.name, DEMOS[args.name]())]
    for name, spec in runs:
        result = run(spec, sim)
        print(_summary(name, result))
        path = os.path.join(args.out, f"{name}.svg")
        write_svg(result.log, path, SvgStyle(oval=spec.oval, title=name))
        print(f"wrote {path}")
        if args.csv:
            write_csv(result.log, os.path.join(args.out, f"{name}.csv"))
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = _parser().parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    handlers = {"run": _cmd_run, "bench": _cmd_bench, "plot": _cmd_plot, "demo": _cmd_demo}
    try:
        return handlers[args.command](args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        target = exc.filename if exc.filename is not None else ""
        print(f"vortexnav: error: {target}: {exc.strerror or exc}", file=sys.stderr)
        return EXIT_FAILURE
    except (ScenarioError, ValueError, RuntimeError, FloatingPointError) as exc:
        print(f"vortexnav: error: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
