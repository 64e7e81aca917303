"""
Optimize Field Use Case

Runs the monotonic optimizer for the gate or for the packet preparation,
with or without dissipation, and writes field, trace and summary. A run
can be resumed from a checkpointed field; the iteration numbering and
the monotonicity check continue from the checkpointed trace.
SRP: Handles only the optimization stage.
DIP: Depends on IArtifactRepository, not on the filesystem.
"""

from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import pandas as pd

from app.application.dtos.run_result import fail, new_result
from app.domain.repositories.artifact_repository import IArtifactRepository
from app.domain.services.pipeline_service import (
    build_basis,
    build_grid,
    build_packet,
    build_target_gate,
    control_config,
    kappa_label,
    resolve_kappas,
)
from app.logging_config import get_logger
from models.control import OctIterationRecord, OctTrace
from models.dynamics import ControlField
from models.run_config import RunConfig
from tools.src.control_tools.optimal_control import (
    fidelity,
    make_targets,
    optimize_gate,
    optimize_gate_dissipative,
    optimize_state_prep,
    phase_spread,
)
from tools.src.exceptions import ConfigurationError, ConvergenceError, SimulatorError
from tools.src.propagation_tools.dissipation import build_dissipation
from tools.src.propagation_tools.propagator import evolution_operator
from tools.src.simulation_tools.qubit_encoding import encode

logger = get_logger(__name__)

TRACE_COLUMNS = ["iteration", "objective", "fidelity", "fluence"]


def trace_frame(records: List[OctIterationRecord]) -> pd.DataFrame:
    return pd.DataFrame([record.model_dump() for record in records], columns=TRACE_COLUMNS)


class OptimizeFieldUseCase:
    def __init__(self, repository: IArtifactRepository):
        self.repository = repository

    def execute(
        self,
        run_config: RunConfig,
        mode: str = "gate",
        functional: Optional[str] = None,
        dissipative: bool = False,
        kappas: Optional[Sequence[float]] = None,
        resume: Optional[str] = None,
        guess: Optional[str] = None,
    ) -> Dict[str, Any]:
        """
        Optimize one field (or one per kappa for dissipative runs)

        Args:
            run_config: Validated run configuration
            mode: "gate" or "prep"
            functional: "F" or "P" (defaults to the configured functional)
            dissipative: Optimize under the heating model
            kappas: kappa values overriding the configuration
            resume: Checkpointed field CSV to restart from
            guess: Field CSV used as a fresh starting field (ignored with resume)

        Returns:
            Result dict; exit code 4 when a run ends below the fidelity goal
        """
        result = new_result()
        config_hash = run_config.config_hash()
        try:
            if mode not in ("gate", "prep"):
                raise ConfigurationError(f"Unknown optimization mode '{mode}'")
            if mode == "prep" and dissipative:
                raise ConfigurationError("Packet preparation is optimized without dissipation")
            config = control_config(run_config, functional)
            kappa_values = resolve_kappas(run_config, kappas, required=dissipative)
            basis = build_basis(run_config)

            stems = [self._stem(mode, config.functional, kappa) for kappa in kappa_values] if dissipative \
                else [self._stem(mode, config.functional, None)]
            if resume is not None and len(stems) > 1:
                raise ConfigurationError(
                    f"A checkpoint resumes one run; got {len(stems)} kappa values, pass a single kappa with resume"
                )

            guess_field, start_iteration, previous_records = self._load_resume(resume)
            if guess_field is None and guess is not None:
                guess_field = self.repository.read_field(guess)

            for index, stem in enumerate(stems):
                def checkpoint(field: ControlField, trace: OctTrace, stem=stem) -> None:
                    self.repository.write_field(f"checkpoints/{stem}_field.csv", field, config_hash)
                    self.repository.write_table(
                        f"checkpoints/{stem}_trace.csv", trace_frame(previous_records + trace.records), config_hash
                    )
                    logger.info("Checkpoint written at iteration %d", trace.last.iteration)

                previous_objective = previous_records[-1].objective if previous_records else None
                summary: Dict[str, Any] = {"mode": mode, "functional": config.functional}

                if mode == "prep":
                    target = encode(build_packet(run_config.packets[0], build_grid(run_config)))
                    field, trace = optimize_state_prep(
                        basis, target, config, guess_field, start_iteration, checkpoint, previous_objective
                    )
                else:
                    gate = build_target_gate(run_config)
                    targets = make_targets(gate, config)
                    if dissipative:
                        kappa = kappa_values[index]
                        model = build_dissipation(
                            basis, kappa, run_config.dissipation.deltas, run_config.dissipation.all_dipole_pairs
                        )
                        summary["kappa_au"] = kappa
                        summary["heating_time_s"] = model.mean_heating_time_s
                        field, trace = optimize_gate_dissipative(
                            basis, targets, config, model, guess_field, start_iteration, checkpoint, previous_objective
                        )
                    else:
                        field, trace = optimize_gate(
                            basis, targets, config, guess_field, start_iteration, checkpoint, previous_objective
                        )
                # field and trace go to disk before the post-hoc diagnostics can fail
                result["outputs"] += [
                    str(self.repository.write_field(f"optimize/{stem}_field.csv", field, config_hash)),
                    str(self.repository.write_table(
                        f"optimize/{stem}_trace.csv", trace_frame(previous_records + trace.records), config_hash
                    )),
                ]
                if mode == "gate":
                    realized = evolution_operator(field, basis, gate.size)
                    summary["unitary_fidelity"] = fidelity(gate, realized)
                    summary["phase_spread_rad"] = phase_spread(gate, realized)

                summary.update({
                    "final_objective": trace.last.objective,
                    "final_fidelity": trace.final_fidelity,
                    "iterations": trace.last.iteration,
                    "converged": trace.converged,
                    "stop_reason": trace.stop_reason,
                    "fluence_au": field.fluence(),
                    "peak_field_vpm": field.peak_vpm(),
                })
                result["outputs"].append(
                    str(self.repository.write_json(f"optimize/{stem}_summary.json", summary, config_hash))
                )
                result["summary"][stem] = summary

                if not trace.converged:
                    message = (
                        f"{stem}: fidelity {trace.final_fidelity:.8f} below goal {config.fidelity_goal} "
                        f"({trace.stop_reason})"
                    )
                    result["warnings"].append(message)
                    result["exit_code"] = ConvergenceError.exit_code
                    result["success"] = False
        except SimulatorError as exc:
            logger.error("Optimization failed: %s", exc)
            return fail(result, exc)
        return result

    def _load_resume(self, resume: Optional[str]) -> Tuple[Optional[ControlField], int, List[OctIterationRecord]]:
        """Field, next iteration number and earlier records of a checkpoint"""
        if resume is None:
            return None, 0, []
        field = self.repository.read_field(resume)

        path = Path(resume)
        trace_path = path.with_name(path.name.replace("_field.csv", "_trace.csv"))
        if trace_path == path or not self.repository.exists(str(trace_path)):
            logger.warning("No trace next to %s; iteration numbering restarts", resume)
            return field, 0, []

        frame = self.repository.read_table(str(trace_path))
        records = [
            OctIterationRecord(
                iteration=int(row.iteration),
                objective=float(row.objective),
                fidelity=float(row.fidelity),
                fluence=float(row.fluence),
            )
            for row in frame.itertuples(index=False)
        ]
        # the checkpointed field is the one of the last record; it is re-evaluated as the first new record
        start = records[-1].iteration if records else 0
        return field, start, records[:-1]

    @staticmethod
    def _stem(mode: str, functional: str, kappa: Optional[float]) -> str:
        stem = f"{mode}_{functional}"
        return stem if kappa is None else f"{stem}_{kappa_label(kappa)}"
