"""
Command-Line Application Entry Point

Subcommands run one pipeline stage each from a TOML run configuration:

    trap      diagonalize the trap, write eigenbasis, lines and heating times
    gate      build the elementary gate and the ideal packet evolution
    optimize  optimize a gate or preparation field (optionally dissipative)
    simulate  run the packets through the pulse sequence on the ion
    analyze   spectra, band-pass filtering and re-optimization of fields

Exit codes: 0 success, 2 configuration error, 3 numerical failure,
4 optimization ended below the fidelity goal.

SOLID Principles:
- SRP: Only handles argument parsing and dispatch
- DIP: Use cases come from the dependency injection container
"""

import argparse
import json
import sys
from typing import List, Optional

from app.config import config
from app.container import container
from app.logging_config import LoggingConfig, get_logger
from models.run_config import RunConfig
from tools.src.exceptions import ConfigurationError, SimulatorError

logger = get_logger(__name__)

COMMANDS = ("trap", "gate", "optimize", "simulate", "analyze")


def parse_kappa_list(text: str) -> List[float]:
    """Comma-separated kappa values in a.u., e.g. 1e-18,5e-18"""
    try:
        values = [float(item) for item in text.split(",") if item.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"Invalid kappa list '{text}'") from exc
    if not values:
        raise argparse.ArgumentTypeError("Empty kappa list")
    if any(value < 0 for value in values):
        raise argparse.ArgumentTypeError("kappa values must be non-negative")
    return values


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, help="TOML run configuration")
    common.add_argument("--tier", choices=["desk", "paper"], help="Override the scale tier")
    common.add_argument("--out", help="Output directory (default: config output_dir, then OUTPUT_DIR)")
    common.add_argument("--kappa", type=parse_kappa_list, help="Comma-separated kappa values, a.u.")
    common.add_argument("--long-running", action="store_true", help="Acknowledge a paper-tier run")
    common.add_argument("--threads", type=int, help="Worker threads (overrides THREADS)")
    common.add_argument("--log-level", help="Log level (overrides LOG_LEVEL)")
    common.add_argument("--log-dir", help="Log directory (overrides LOG_DIR)")

    parser = argparse.ArgumentParser(prog="ion-trap-tdse", description="Trapped-ion quantum simulation toolkit")
    commands = parser.add_subparsers(dest="command", required=True)

    commands.add_parser("trap", parents=[common], help="Diagonalize the trap")
    commands.add_parser("gate", parents=[common], help="Build the elementary gate")

    optimize = commands.add_parser("optimize", parents=[common], help="Optimize a control field")
    optimize.add_argument("--mode", choices=["gate", "prep"], default="gate")
    optimize.add_argument("--functional", choices=["F", "P"])
    optimize.add_argument("--dissipative", action="store_true", help="Optimize under the heating model")
    optimize.add_argument("--resume", help="Checkpointed field CSV to restart from")
    optimize.add_argument("--guess", help="Field CSV to start from instead of the multi-line guess")

    simulate = commands.add_parser("simulate", parents=[common], help="Simulate the pulse sequence")
    simulate.add_argument("--field", help="Gate field CSV")
    simulate.add_argument("--prep-field", help="Preparation field CSV")

    analyze = commands.add_parser("analyze", parents=[common], help="Analyze field files")
    analyze.add_argument("--field", action="append", default=[], help="Field CSV (repeatable)")
    analyze.add_argument("--reoptimize", action="store_true", help="Filter the first field and optimize again")
    analyze.add_argument("--functional", choices=["F", "P"])
    return parser


def run(args: argparse.Namespace) -> dict:
    """Dispatch one subcommand; returns the use case result dict"""
    run_config = RunConfig.from_toml(args.config, args.tier, args.long_running, args.out)
    output_dir = args.out or run_config.output_dir or config.output.output_dir
    repository = container.artifact_repository(root=output_dir)
    logger.info("Run %s: tier=%s config_hash=%s output=%s",
                args.command, run_config.tier, run_config.config_hash(), output_dir)

    if args.command == "trap":
        return container.build_trap_use_case(repository=repository).execute(run_config, args.kappa)
    if args.command == "gate":
        return container.build_gate_use_case(repository=repository).execute(run_config)
    if args.command == "optimize":
        return container.optimize_field_use_case(repository=repository).execute(
            run_config, args.mode, args.functional, args.dissipative, args.kappa, args.resume, args.guess
        )
    if args.command == "simulate":
        threads = args.threads or config.runtime.threads
        return container.simulate_run_use_case(repository=repository, threads=threads).execute(
            run_config, args.field, args.prep_field, args.kappa
        )
    return container.analyze_run_use_case(repository=repository).execute(
        run_config, args.field, args.reoptimize, args.functional, args.kappa
    )


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    LoggingConfig.setup_logging(args.log_level or config.logging.level, args.log_dir or config.logging.log_dir)

    try:
        result = run(args)
    except ConfigurationError as exc:
        print(f"Configuration error: {exc}", file=sys.stderr)
        return exc.exit_code
    except SimulatorError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except ValueError as exc:
        print(f"Configuration error: {exc}", file=sys.stderr)
        return ConfigurationError.exit_code

    print(json.dumps(result["summary"], sort_keys=True, indent=2, default=str))
    for warning in result["warnings"]:
        print(f"Warning: {warning}", file=sys.stderr)
    for error in result["errors"]:
        print(f"Error: {error}", file=sys.stderr)
    return result["exit_code"]


if __name__ == "__main__":
    sys.exit(main())
