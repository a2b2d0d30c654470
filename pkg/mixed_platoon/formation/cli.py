# -*- coding: utf-8 -*-
"""CLI interface for the platoon formation tool."""

import argparse
import logging
import sys
from typing import List

from ..shared import OutputSink
from ..shared.exceptions import OutputError
from ..shared.utils import format_number, parse_int_list
from .config import Config
from .exceptions import (
    ConfigurationError,
    FormationError,
    InfeasibleError,
    ScenarioError,
)
from .formatters import OutputFormatter
from .study import FormationStudy

EXIT_OK = 0
EXIT_NOT_FORMED = 1
EXIT_INVALID_INPUT = 2
EXIT_INTERNAL = 3


def setup_logging(debug: bool = False, quiet: bool = False) -> None:
    """Setup logging configuration."""
    if quiet:
        level = logging.ERROR
    elif debug:
        level = logging.DEBUG
    else:
        level = logging.INFO

    logging.basicConfig(
        level=level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        handlers=[logging.FileHandler("platoon_formation.log"), logging.StreamHandler()],
    )


def _add_common_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("scenario", help="Scenario YAML file")
    parser.add_argument(
        "--quiet", "-q", action="store_true", help="Suppress console output, only save files"
    )
    parser.add_argument("--debug", action="store_true", help="Enable debug logging")


def _add_output_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--output-format",
        choices=["json", "yaml", "both"],
        default="json",
        help="Summary format (default: json)",
    )
    parser.add_argument(
        "--out",
        "--output-dir",
        dest="output_dir",
        default="./platoon-results",
        help="Output directory (default: ./platoon-results)",
    )
    parser.add_argument(
        "--no-timestamp", action="store_true", help="Don't include timestamp in filenames"
    )


def create_parser() -> argparse.ArgumentParser:
    """Create CLI argument parser."""
    parser = argparse.ArgumentParser(
        description="Plan, simulate and sweep CAV-led platoon formation in mixed traffic",
        prog="platoon-formation",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    simulate = commands.add_parser("simulate", help="Plan and simulate one maneuver")
    _add_common_arguments(simulate)
    _add_output_arguments(simulate)
    simulate.add_argument("--t-p", type=float, help="Desired formation time (s)")
    simulate.add_argument("--horizon", type=float, help="Simulation end time (s)")
    simulate.add_argument(
        "--lead-in", type=float, default=0.0, help="Seconds simulated before control-zone entry"
    )

    feasible = commands.add_parser("feasible", help="Print the feasible transition interval")
    _add_common_arguments(feasible)
    feasible.add_argument("--t-p", type=float, help="Desired formation time (s)")

    solve = commands.add_parser("solve", help="Print the braking level for a transition")
    _add_common_arguments(solve)
    solve.add_argument("--tau-t", type=float, required=True, help="Transition duration (s)")

    sweep = commands.add_parser("sweep", help="Run a robustness sweep")
    _add_common_arguments(sweep)
    _add_output_arguments(sweep)
    sweep.add_argument("--axis", choices=["tau", "eta", "rho", "alpha"], required=True)
    sweep.add_argument("--n", default="2,3,4", help="Fleet sizes (default: 2,3,4)")
    sweep.add_argument("--samples", type=int, default=50, help="Samples per axis (default: 50)")
    sweep.add_argument("--seed", type=int, default=0, help="Seed for parameter draws")
    sweep.add_argument("--jitter", type=float, default=0.0, help="Per-HDV parameter jitter")
    sweep.add_argument(
        "--range", nargs=2, type=float, metavar=("LO", "HI"), help="Axis value range"
    )
    sweep.add_argument("--workers", type=int, help="Parallel worker processes")

    validate = commands.add_parser("validate", help="Validate a scenario file")
    _add_common_arguments(validate)

    return parser


def _run_simulate(args, study: FormationStudy, formatter: OutputFormatter, output) -> int:
    scenario = study.load(args.scenario)
    result = study.simulate(scenario, t_p=args.t_p, horizon=args.horizon, lead_in=args.lead_in)
    saved = formatter.save_run(result.trajectory, result.summary)
    formatter.display_results(result.summary)
    output.success(f"Results saved to: {', '.join(saved)}")
    if not result.summary.formed:
        output.warning(f"Platoon not formed: {result.summary.formation.get('reason')}")
        return EXIT_NOT_FORMED
    return EXIT_OK


def _run_feasible(args, study: FormationStudy, output) -> int:
    scenario = study.load(args.scenario)
    result = study.feasibility(scenario, t_p=args.t_p)
    lo, hi = result["interval"]
    output.verdict("interval", f"[{lo:.6f}, {hi:.6f}] s")
    if "tau_t" in result:
        output.verdict("tau_t", f"{result['tau_t']:.6f} s")
    verdict = "feasible" if result["feasible"] else "infeasible"
    if result.get("binding"):
        verdict += f" ({result['binding']})"
    output.verdict("verdict", verdict)
    return EXIT_OK if result["feasible"] else EXIT_NOT_FORMED


def _run_solve(args, study: FormationStudy, output) -> int:
    scenario = study.load(args.scenario)
    result = study.solve(scenario, args.tau_t)
    output.verdict("u_p", f"{format_number(result['u_p'])} m/s^2")
    output.info(f"v_eq: {result['v_eq']:.6f} m/s")
    open_gaps = [gap for gap in result["cruise_gaps"] if gap > scenario.tolerances.eps_delta]
    if open_gaps:
        output.warning(
            f"HDVs settle at a positive platoon gap ({format_number(max(open_gaps), 4)} m) "
            f"at v_eq; the platoon cannot form"
        )
    if result["binding"]:
        output.warning(f"tau_t outside the feasible interval ({result['binding']})")
    return EXIT_OK


def _run_sweep(args, study: FormationStudy, formatter: OutputFormatter, output) -> int:
    scenario = study.load(args.scenario)
    records, summaries = study.sweep(
        scenario,
        args.axis,
        tuple(parse_int_list(args.n)),
        args.samples,
        seed=args.seed,
        jitter=args.jitter,
        value_range=tuple(args.range) if args.range else None,
    )
    saved = formatter.save_sweep(scenario.name, args.axis, records, summaries)
    formatter.display_sweep(summaries)
    output.success(f"Results saved to: {', '.join(saved)}")
    return EXIT_OK


# pylint: disable=too-many-return-statements
def main(args: List[str] = None) -> int:
    """Main CLI entry point."""
    parser = create_parser()
    try:
        parsed_args = parser.parse_args(args)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_INVALID_INPUT

    setup_logging(parsed_args.debug, parsed_args.quiet)
    logger = logging.getLogger(__name__)

    output = OutputSink(parsed_args.quiet, parsed_args.debug)

    try:
        output_formats = []
        if hasattr(parsed_args, "output_format"):
            output_formats = (
                [parsed_args.output_format]
                if parsed_args.output_format != "both"
                else ["json", "yaml"]
            )
        config = Config(
            output_formats=output_formats or None,
            output_directory=getattr(parsed_args, "output_dir", "./platoon-results"),
            include_timestamp=not getattr(parsed_args, "no_timestamp", False),
            debug=parsed_args.debug,
            quiet=parsed_args.quiet,
        )
        if getattr(parsed_args, "workers", None):
            config.workers = parsed_args.workers

        study = FormationStudy(config, output)
        logger.info("Running %s on %s", parsed_args.command, parsed_args.scenario)

        if parsed_args.command == "validate":
            scenario = study.load(parsed_args.scenario)
            output.success(f"Scenario {scenario.name} is valid ({scenario.n_vehicles} vehicles)")
            return EXIT_OK
        if parsed_args.command == "feasible":
            return _run_feasible(parsed_args, study, output)
        if parsed_args.command == "solve":
            return _run_solve(parsed_args, study, output)

        formatter = OutputFormatter(config, output)
        if parsed_args.command == "simulate":
            return _run_simulate(parsed_args, study, formatter, output)
        return _run_sweep(parsed_args, study, formatter, output)

    except (ScenarioError, ConfigurationError, ValueError) as e:
        logger.error("Invalid input: %s", e)
        output.error(f"Invalid input: {e}")
        return EXIT_INVALID_INPUT
    except InfeasibleError as e:
        logger.error("Infeasible: %s", e)
        output.error(f"Infeasible: {e}")
        return EXIT_NOT_FORMED
    except (FormationError, OutputError) as e:
        logger.error("Platoon formation error: %s", e)
        output.error(f"Platoon formation error: {e}")
        return EXIT_INTERNAL
    except Exception as e:
        logger.error("Unexpected error: %s", e)
        output.error(f"Unexpected error: {e}")
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
