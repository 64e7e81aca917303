"""
Full-Scale Reproduction Script

Runs the complete paper-tier pipeline: trap, gate, the closed J_P and J_F
gate optimizations, the packet preparation, the dissipative
re-optimization at the smallest kappa, the pulse simulations for every
kappa and the spectral analysis. Each optimization checkpoints its field
and trace; rerunning the script resumes every unfinished optimization
from its last checkpoint.

Usage:
    python scripts/run_full_scale.py --config configs/paper.toml --long-running [--out DIR]
"""

import argparse
import sys
import tomllib
from pathlib import Path

project_root = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(project_root))

from app.config import config  # noqa: E402
from app.container import container  # noqa: E402
from app.logging_config import LoggingConfig, get_logger  # noqa: E402
from models.run_config import RunConfig  # noqa: E402
from tools.src.exceptions import ConfigurationError  # noqa: E402

logger = get_logger(__name__)

# penalty strength of the trace functional
ALPHA0_F = 4e15


def _resume_path(repository, stem: str):
    checkpoint = f"checkpoints/{stem}_field.csv"
    return str(repository.path(checkpoint)) if repository.exists(checkpoint) else None


def _report(stage: str, result: dict) -> int:
    for warning in result["warnings"]:
        logger.warning("%s: %s", stage, warning)
    for error in result["errors"]:
        logger.error("%s: %s", stage, error)
    logger.info("%s finished with exit code %d", stage, result["exit_code"])
    return result["exit_code"]


def main() -> int:
    parser = argparse.ArgumentParser(description="Paper-tier reproduction with checkpointing")
    parser.add_argument("--config", default=str(project_root / "configs" / "paper.toml"))
    parser.add_argument("--out", help="Output directory")
    parser.add_argument("--long-running", action="store_true", help="Acknowledge a run of many hours")
    args = parser.parse_args()

    LoggingConfig.setup_logging(config.logging.level, config.logging.log_dir)
    try:
        with open(args.config, "rb") as handle:
            data = tomllib.load(handle)
        run_config = RunConfig.from_dict(data, "paper", args.long_running, args.out)
        data.setdefault("control", {}).update({"functional": "F", "alpha0": ALPHA0_F})
        trace_config = RunConfig.from_dict(data, "paper", args.long_running, args.out)
    except (OSError, tomllib.TOMLDecodeError, ConfigurationError) as exc:
        logger.error("Configuration error: %s", exc)
        return ConfigurationError.exit_code

    output_dir = args.out or run_config.output_dir or config.output.output_dir
    repository = container.artifact_repository(root=output_dir)
    optimize = container.optimize_field_use_case(repository=repository)
    kappas = run_config.dissipation.kappa

    worst = 0
    worst = max(worst, _report("trap", container.build_trap_use_case(repository=repository).execute(run_config)))
    worst = max(worst, _report("gate", container.build_gate_use_case(repository=repository).execute(run_config)))
    if worst in (2, 3):
        return worst

    worst = max(worst, _report("optimize gate P", optimize.execute(
        run_config, "gate", "P", resume=_resume_path(repository, "gate_P"))))
    worst = max(worst, _report("optimize gate F", optimize.execute(
        trace_config, "gate", "F", resume=_resume_path(repository, "gate_F"))))
    worst = max(worst, _report("optimize prep", optimize.execute(
        run_config, "prep", "P", resume=_resume_path(repository, "prep_P"))))

    gate_field = str(repository.path("optimize/gate_P_field.csv"))
    prep_field = str(repository.path("optimize/prep_P_field.csv"))

    if kappas:
        smallest = min(kappas)
        stem = f"gate_P_kappa{smallest:.3g}"
        worst = max(worst, _report(f"optimize gate P kappa={smallest:.3g}", optimize.execute(
            run_config, "gate", "P", dissipative=True, kappas=[smallest],
            resume=_resume_path(repository, stem), guess=gate_field)))

    simulate = container.simulate_run_use_case(repository=repository, threads=config.runtime.threads)
    worst = max(worst, _report("simulate", simulate.execute(run_config, gate_field, prep_field, kappas)))

    fields = [gate_field, str(repository.path("optimize/gate_F_field.csv"))]
    analyze = container.analyze_run_use_case(repository=repository)
    worst = max(worst, _report("analyze", analyze.execute(trace_config, fields, reoptimize=True, functional="F")))
    return worst


if __name__ == "__main__":
    sys.exit(main())
