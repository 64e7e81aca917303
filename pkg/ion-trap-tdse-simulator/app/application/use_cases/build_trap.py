"""
Build Trap Use Case

Diagonalizes the trap and writes the eigenbasis, the register transition
table and the heating times of the configured kappa values.
SRP: Handles only the trap stage.
DIP: Depends on IArtifactRepository, not on the filesystem.
"""

from typing import Any, Dict, Optional, Sequence

import numpy as np
import pandas as pd

from app.application.dtos.run_result import fail, new_result
from app.domain.repositories.artifact_repository import IArtifactRepository
from app.domain.services.pipeline_service import build_basis, resolve_kappas
from app.logging_config import get_logger
from models.run_config import RunConfig
from tools.src.analysis_computation_tools.trajectory_analysis import heating_time_table
from tools.src.exceptions import SimulatorError
from tools.src.trap_tools.trap_model import oscillator_length, transition_table
from tools.src.units import angular_to_hz, length_to_nm

logger = get_logger(__name__)


class BuildTrapUseCase:
    def __init__(self, repository: IArtifactRepository):
        self.repository = repository

    def execute(self, run_config: RunConfig, kappas: Optional[Sequence[float]] = None) -> Dict[str, Any]:
        result = new_result()
        config_hash = run_config.config_hash()
        try:
            basis = build_basis(run_config)
            dimension = basis.size

            energies = pd.DataFrame({
                "j": np.arange(dimension),
                "energy_au": basis.energies,
                "frequency_from_ground_hz": angular_to_hz(basis.energies - basis.energies[0]),
            })
            rows, cols = np.meshgrid(np.arange(dimension), np.arange(dimension), indexing="ij")
            matrix = pd.DataFrame({
                "j": rows.ravel(),
                "k": cols.ravel(),
                "z_au": basis.z_matrix.ravel(),
                "dipole_au": basis.dipole.ravel(),
            })
            primitive, states = np.meshgrid(np.arange(basis.vectors.shape[0]), np.arange(dimension), indexing="ij")
            vectors = pd.DataFrame({
                "n": primitive.ravel(),
                "j": states.ravel(),
                "coefficient": basis.vectors.ravel(),
            })
            lines = pd.DataFrame(
                [{**line.model_dump(), "delta": line.delta} for line in transition_table(basis, (1, 3))],
                columns=["j", "k", "delta", "frequency_hz", "dipole_au"],
            )

            result["outputs"] += [
                str(self.repository.write_table("trap/energies.csv", energies, config_hash)),
                str(self.repository.write_table("trap/position_dipole.csv", matrix, config_hash)),
                str(self.repository.write_table("trap/eigenvectors.csv", vectors, config_hash)),
                str(self.repository.write_table("trap/transitions.csv", lines, config_hash)),
            ]

            kappa_values = resolve_kappas(run_config, kappas)
            if kappa_values:
                table = heating_time_table(
                    basis, kappa_values, run_config.dissipation.deltas, run_config.dissipation.all_dipole_pairs
                )
                result["outputs"].append(str(self.repository.write_table("trap/heating_times.csv", table, config_hash)))

            summary = {
                "omega_au": basis.omega,
                "trap_frequency_mhz": angular_to_hz(basis.omega) / 1e6,
                "oscillator_length_au": oscillator_length(run_config.trap),
                "oscillator_length_nm": length_to_nm(oscillator_length(run_config.trap)),
                "primitive_size": run_config.trap.primitive_size,
                "dynamical_size": dimension,
                "computational_size": basis.computational_size,
                "transition_count": len(lines),
            }
            result["outputs"].append(str(self.repository.write_json("trap/summary.json", summary, config_hash)))
            result["summary"] = summary
            logger.info("Trap stage finished: %d eigenstates, %d register lines", dimension, len(lines))
        except SimulatorError as exc:
            logger.error("Trap stage failed: %s", exc)
            return fail(result, exc)
        return result
