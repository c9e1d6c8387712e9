"""Command-line interface.

Exit codes: 0 success, 1 validation failure, 2 runtime fault.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import kernels
from .engine import SimulationFault, compute_metrics, run
from .plots import emit_plots
from .potential import v_m
from .scenario import ScenarioError, dump_scenario, load_scenario
from .trajectory import format_metrics, format_trajectory, parse_trajectory, read_trajectory

EXIT_OK, EXIT_INVALID, EXIT_FAULT = 0, 1, 2


def _load(ref):
    try:
        return load_scenario(ref)
    except (ScenarioError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return None


def cmd_check(args) -> int:
    scenario = _load(args.scenario)
    if scenario is None:
        return EXIT_INVALID
    if args.echo:
        sys.stdout.write(dump_scenario(scenario))
    else:
        print(f"ok: {scenario.name} ({len(scenario.agents)} agents, "
              f"{len(scenario.obstacles)} obstacles, admissible={scenario.is_admissible()})")
    return EXIT_OK


def _obstacle_tuples(scenario):
    return [(o.center.x, o.center.y, o.radius) for o in scenario.obstacles]


def cmd_simulate(args) -> int:
    scenario = _load(args.scenario)
    if scenario is None:
        return EXIT_INVALID
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    try:
        records, _ = run(scenario, parallel=args.parallel)
    except SimulationFault as exc:
        print(f"fault: {exc}", file=sys.stderr)
        if exc.records:
            (out / "trajectory.csv").write_text(
                format_trajectory(exc.records, scenario.formation, v_m(scenario.potential),
                                  scenario.tol_conv, scenario.name, _obstacle_tuples(scenario))
            )
        return EXIT_FAULT
    text = format_trajectory(records, scenario.formation, v_m(scenario.potential),
                             scenario.tol_conv, scenario.name, _obstacle_tuples(scenario))
    (out / "trajectory.csv").write_text(text)
    (out / "scenario.yaml").write_text(dump_scenario(scenario))
    # summarize what was written so `report` on the file prints the same bytes
    traj = parse_trajectory(text)
    summary = format_metrics(compute_metrics(traj.records, traj.V_m, traj.tol_conv))
    (out / "metrics.txt").write_text(summary)
    sys.stdout.write(summary)
    if args.plots:
        emit_plots(records, out / "plots", _obstacle_tuples(scenario))
    return EXIT_OK


def cmd_report(args) -> int:
    try:
        traj = read_trajectory(args.records)
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    sys.stdout.write(format_metrics(compute_metrics(traj.records, traj.V_m, traj.tol_conv)))
    return EXIT_OK


def cmd_plot(args) -> int:
    try:
        traj = read_trajectory(args.records)
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    for path in emit_plots(traj.records, args.out, traj.obstacles):
        print(path)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="unicycle-formation",
        description="Formation control of unicycle robots with bounded inputs.",
    )
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("simulate", help="run a scenario and write trajectory + metrics")
    s.add_argument("scenario", help="scenario file, or the name of a shipped scenario")
    s.add_argument("--out", required=True, help="output directory")
    s.add_argument("--parallel", action="store_true", help="evaluate agents in a thread pool")
    s.add_argument("--plots", action="store_true", help="also write the SVG figures")
    s.set_defaults(func=cmd_simulate)

    c = sub.add_parser("check", help="validate a scenario")
    c.add_argument("scenario")
    c.add_argument("--echo", action="store_true", help="print the scenario with defaults filled")
    c.set_defaults(func=cmd_check)

    r = sub.add_parser("report", help="recompute metrics from a trajectory file")
    r.add_argument("records")
    r.set_defaults(func=cmd_report)

    pl = sub.add_parser("plot", help="render figures from a trajectory file")
    pl.add_argument("records")
    pl.add_argument("--out", required=True)
    pl.set_defaults(func=cmd_plot)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    logging.getLogger(__name__).info("kernel backend: %s", kernels.BACKEND)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
