"""
Build Gate Use Case

Assembles the elementary evolution operator of the simulated system and
runs the configured packets through it, next to their exact harmonic
evolution.
SRP: Handles only the gate stage.
DIP: Depends on IArtifactRepository, not on the filesystem.
"""

from typing import Any, Dict

import numpy as np
import pandas as pd

from app.application.dtos.run_result import fail, new_result
from app.domain.repositories.artifact_repository import IArtifactRepository
from app.domain.services.pipeline_service import (
    build_grid,
    build_packet,
    build_system,
    build_target_gate,
    packet_label,
)
from app.logging_config import get_logger
from models.run_config import RunConfig
from tools.src.analysis_computation_tools.trajectory_analysis import mean_position_sim, periodicity_residual
from tools.src.exceptions import SimulatorError
from tools.src.simulation_tools.grid_simulation import classic_propagate, exact_probability_snapshots

logger = get_logger(__name__)


class BuildGateUseCase:
    def __init__(self, repository: IArtifactRepository):
        self.repository = repository

    def execute(self, run_config: RunConfig) -> Dict[str, Any]:
        result = new_result()
        config_hash = run_config.config_hash()
        simulation = run_config.simulation
        try:
            system = build_system(run_config)
            grid = build_grid(run_config)
            gate = build_target_gate(run_config)

            rows, cols = np.meshgrid(np.arange(gate.size), np.arange(gate.size), indexing="ij")
            entries = pd.DataFrame({
                "j": rows.ravel(),
                "k": cols.ravel(),
                "real": gate.entries.real.ravel(),
                "imag": gate.entries.imag.ravel(),
            })
            result["outputs"].append(str(self.repository.write_table("gate/gate.csv", entries, config_hash)))

            summary = {
                "size": gate.size,
                "delta_t_au": gate.delta_t,
                "substeps": gate.steps,
                "time_step_au": gate.time_step,
                "unitarity_deviation": gate.unitarity_deviation(),
                "packets": {},
            }

            for index, spec in enumerate(run_config.packets):
                label = packet_label(index)
                packets = classic_propagate(build_packet(spec, grid), gate, simulation.n_pulses)
                exact = exact_probability_snapshots(
                    system, grid, spec.sigma, spec.x0, simulation.delta_t, simulation.n_pulses
                )
                snapshots = pd.DataFrame([
                    {
                        "l": l,
                        "j": j,
                        "x_j": grid.points[j],
                        "prob": packet.probabilities()[j],
                        "exact_prob": exact[l, j],
                    }
                    for l, packet in enumerate(packets)
                    for j in range(grid.size)
                ], columns=["l", "j", "x_j", "prob", "exact_prob"])
                result["outputs"].append(
                    str(self.repository.write_table(f"gate/{label}_snapshots.csv", snapshots, config_hash))
                )

                packet_summary = {
                    "sigma": spec.sigma,
                    "x0": spec.x0,
                    "mean_positions": [mean_position_sim(packet.probabilities(), grid) for packet in packets],
                }
                if simulation.n_pulses >= 10:
                    packet_summary["periodicity_residual"] = periodicity_residual(
                        [packet.probabilities() for packet in packets]
                    )
                summary["packets"][label] = packet_summary

            result["outputs"].append(str(self.repository.write_json("gate/summary.json", summary, config_hash)))
            result["summary"] = {
                "unitarity_deviation": summary["unitarity_deviation"],
                "size": gate.size,
            }
            logger.info("Gate stage finished: unitarity deviation %.3e", gate.unitarity_deviation())
        except SimulatorError as exc:
            logger.error("Gate stage failed: %s", exc)
            return fail(result, exc)
        return result
