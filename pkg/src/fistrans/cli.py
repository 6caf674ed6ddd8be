"""Command-line interface.

Subcommands:

* ``simulate <scenario-file> [--out CSV]``: solve the transition and print
  a summary; optionally write the per-year CSV.
* ``breakeven <scenario-file>``: run the administrative-savings pipeline
  and print the break-even year and windowed cumulative net savings.
* ``scenario-table``: print the six cataloged administrative-savings rows.
* ``jshape <scenario-file>``: solve, classify the effective-expenditure
  series, and check the first-year outlay against the long-run cost gain.
* ``validate <scenario-file>``: parse and invariant-check only.

Every subcommand accepts ``--preset NAME`` in place of a file. Exit codes:
0 on success, 1 on validation or syntax errors, 2 on solver
non-convergence. Diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence, Tuple

import numpy as np

from .analytics import baseline_gap, equal_step_path, jshape_condition, savings_series
from .calibration import DEFAULT_PRESET_NAME, load_default_preset
from .costs import adjustment_cost, stage_cost
from .planner import SolverConfig, gradualism_metric, stage_cost_minimizer
from .scenario_io import (
    RunReport,
    ScenarioSyntaxError,
    build_report,
    emit_trajectory_csv,
    load_preset_scenario,
    parse_scenario_info,
)
from .types import ExpenditureVector, Scenario, ValidationError

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_NOT_CONVERGED = 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fistrans",
        description="Simulate public-expenditure transitions under convex adjustment costs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_scenario_args(p: argparse.ArgumentParser, file_optional: bool = True) -> None:
        nargs = "?" if file_optional else None
        p.add_argument("scenario_file", nargs=nargs, help="scenario file path")
        p.add_argument("--preset", default=None, help="preset name used when no file is given")

    p_sim = sub.add_parser("simulate", help="solve the transition and report")
    add_scenario_args(p_sim)
    p_sim.add_argument("--out", default=None, help="write the per-year CSV here ('-' for stdout)")
    p_sim.add_argument("--max-iterations", type=int, default=None, help="solver iteration budget")

    p_be = sub.add_parser("breakeven", help="administrative-savings timing")
    add_scenario_args(p_be)

    p_table = sub.add_parser("scenario-table", help="print the cataloged savings scenarios")
    p_table.add_argument("--preset", default=None, help="preset providing the catalog")

    p_js = sub.add_parser("jshape", help="classify the effective-expenditure path")
    add_scenario_args(p_js)
    p_js.add_argument("--max-iterations", type=int, default=None, help="solver iteration budget")

    p_val = sub.add_parser("validate", help="parse and check a scenario file")
    add_scenario_args(p_val, file_optional=False)
    return parser


def _load(args: argparse.Namespace) -> Tuple[Scenario, str, Tuple[str, ...]]:
    """Scenario plus provenance from a file path or preset name."""
    path = getattr(args, "scenario_file", None)
    if path is not None:
        text = Path(path).read_text(encoding="utf-8")
        scenario, info = parse_scenario_info(text)
        return scenario, info.preset, info.overrides
    preset = args.preset if args.preset is not None else DEFAULT_PRESET_NAME
    return load_preset_scenario(preset), preset, ()


def _print_summary(report: RunReport, out) -> None:
    scenario = report.scenario
    solve_report = report.solve
    print(f"scenario: {scenario.name}", file=out)
    print(f"converged: {solve_report.converged}", file=out)
    print(f"iterations: {solve_report.iterations}", file=out)
    print(f"objective: {solve_report.objective:.6f}", file=out)
    print(f"gradient_norm: {solve_report.gradient_norm:.3e}", file=out)
    print(f"max_euler_residual: {solve_report.max_euler_residual:.3e}", file=out)
    try:
        anchor = ExpenditureVector.from_array(stage_cost_minimizer(scenario))
        closure = f"{gradualism_metric(solve_report.trajectory, anchor):.4f}"
    except ValidationError:
        # Zero reform gap or an ill-posed long-run allocation; the solve
        # itself is unaffected.
        closure = "n/a"
    print(f"first_year_gap_closure: {closure}", file=out)
    verdict = report.jshape
    print(
        f"j_shaped: {verdict.is_j_shaped} (peak year {verdict.peak_index}, "
        f"peak {verdict.peak_value:.4f}, terminal {verdict.terminal_value:.4f})",
        file=out,
    )
    if report.savings is not None:
        s = report.savings
        print(f"breakeven_year: {s.breakeven_label}", file=out)
        print(f"cumulative_net_savings[0..{s.window}]: {s.windowed_cumulative:.2f}", file=out)


def _solver_config(args: argparse.Namespace) -> Optional[SolverConfig]:
    budget = getattr(args, "max_iterations", None)
    return None if budget is None else SolverConfig(max_iterations=budget)


def _cmd_simulate(args: argparse.Namespace) -> int:
    scenario, preset, overrides = _load(args)
    report = build_report(scenario, config=_solver_config(args), preset=preset, overrides=overrides)
    _print_summary(report, sys.stdout)
    if args.out is not None:
        csv_text = emit_trajectory_csv(report)
        if args.out == "-":
            sys.stdout.write(csv_text)
        else:
            Path(args.out).write_text(csv_text, encoding="utf-8")
            print(f"csv: {args.out}", file=sys.stdout)
    if not report.solve.converged:
        print("solver did not converge within the iteration budget", file=sys.stderr)
        return EXIT_NOT_CONVERGED
    return EXIT_OK


def _cmd_breakeven(args: argparse.Namespace) -> int:
    scenario, _, _ = _load(args)
    if scenario.breakeven is None:
        print("scenario has no [breakeven] block", file=sys.stderr)
        return EXIT_INVALID
    spec = scenario.breakeven
    series = savings_series(equal_step_path(spec), spec)
    print(f"scenario: {scenario.name}")
    print(f"reduction: {spec.reduction_fraction:.2f} of {spec.adjustable_base:g} over {spec.target_years} years")
    print(f"t* {'> ' + str(series.window) if series.breakeven_year is None else '= ' + str(series.breakeven_year)}")
    print(f"cumulative_net_savings[0..{series.window}]: {series.windowed_cumulative:.2f}")
    return EXIT_OK


def _cmd_scenario_table(args: argparse.Namespace) -> int:
    preset_name = args.preset if args.preset is not None else DEFAULT_PRESET_NAME
    if preset_name != DEFAULT_PRESET_NAME:
        print(f"scenario-table requires the built-in catalog, got preset {preset_name!r}", file=sys.stderr)
        return EXIT_INVALID
    preset = load_default_preset()
    header = f"{'scenario':<9}{'rho':>5}{'H':>3}  {'regime':<7}{'gamma_F':>8}{'eta_F':>7}  {'t*':<4}{'cum_net[0..5]':>14}"
    print(header)
    for row in preset.breakeven_catalog:
        spec = row.spec()
        series = savings_series(equal_step_path(spec), spec)
        label = series.breakeven_label
        print(
            f"{row.name:<9}{row.reduction_fraction:>5.2f}{row.target_years:>3}  "
            f"{row.regime:<7}{row.gamma:>8.2f}{row.eta:>7.2f}  "
            f"{label:<4}{series.windowed_cumulative:>14.2f}"
        )
    return EXIT_OK


def _cmd_jshape(args: argparse.Namespace) -> int:
    scenario, preset, overrides = _load(args)
    report = build_report(scenario, config=_solver_config(args), preset=preset, overrides=overrides)
    long_run = ExpenditureVector.from_array(stage_cost_minimizer(scenario))
    # The rise condition weighs the outlay of the intended reallocation,
    # executed at reform start, against the recurring long-run cost gain.
    intended = adjustment_cost(baseline_gap(long_run, scenario.baseline), scenario.rigidity).value
    c_x0 = stage_cost(scenario.baseline, scenario.cost).value
    c_star = stage_cost(long_run, scenario.cost).value
    holds = jshape_condition(intended, c_x0, c_star)
    verdict = report.jshape
    solved_first = float(report.g_eff[1] - report.solve.trajectory.totals()[1])
    print(f"scenario: {scenario.name}")
    print(f"intended_reallocation_outlay: {intended:.4f}")
    print(f"solved_first_year_outlay: {solved_first:.4f}")
    print(f"long_run_cost_gain: {c_x0 - c_star:.4f}")
    print(f"outlay_exceeds_gain: {holds}")
    print(
        f"j_shaped: {verdict.is_j_shaped} (peak year {verdict.peak_index}, "
        f"peak {verdict.peak_value:.4f}, terminal {verdict.terminal_value:.4f})"
    )
    if not report.solve.converged:
        print("solver did not converge within the iteration budget", file=sys.stderr)
        return EXIT_NOT_CONVERGED
    return EXIT_OK


def _cmd_validate(args: argparse.Namespace) -> int:
    text = Path(args.scenario_file).read_text(encoding="utf-8")
    scenario, info = parse_scenario_info(text)
    print(f"ok: scenario {scenario.name!r} (preset {info.preset}, {len(info.overrides)} overrides)")
    return EXIT_OK


def run_cli(argv: Optional[Sequence[str]] = None) -> int:
    """Run one CLI invocation and return its exit status."""
    parser = _build_parser()
    args = parser.parse_args(list(argv) if argv is not None else None)
    handlers = {
        "simulate": _cmd_simulate,
        "breakeven": _cmd_breakeven,
        "scenario-table": _cmd_scenario_table,
        "jshape": _cmd_jshape,
        "validate": _cmd_validate,
    }
    try:
        return handlers[args.command](args)
    except (ScenarioSyntaxError, ValidationError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INVALID
    except FileNotFoundError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INVALID


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
