"""
Simulate Run Use Case

Runs the encoded packets through N_p gate pulses on the ion, closed and
for every configured kappa, and writes per-pulse read-outs, mean
positions, populations and fidelity traces. Independent kappa values run
on a thread pool of `threads` workers.
SRP: Handles only the simulation stage.
DIP: Depends on IArtifactRepository, not on the filesystem.
"""

from concurrent.futures import ThreadPoolExecutor
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from app.application.dtos.run_result import fail, new_result
from app.domain.repositories.artifact_repository import IArtifactRepository
from app.domain.services.pipeline_service import (
    build_basis,
    build_grid,
    build_packet,
    build_target_gate,
    kappa_label,
    packet_label,
    resolve_kappas,
)
from app.logging_config import get_logger
from models.dynamics import ControlField, DissipationModel, QuantumState
from models.eigen_basis import EigenBasis
from models.run_config import RunConfig
from models.simulation import GateMatrix, Grid
from tools.src.analysis_computation_tools.trajectory_analysis import (
    fidelity_trace,
    mean_position_ion,
    mean_position_sim,
    periodicity_residual,
    relative_position_error,
    simulate_pulses,
)
from tools.src.exceptions import ConfigurationError, SimulatorError
from tools.src.propagation_tools.dissipation import build_dissipation
from tools.src.simulation_tools.grid_simulation import classic_propagate
from tools.src.simulation_tools.qubit_encoding import encode, ion_state, readout_probabilities
from tools.src.units import length_to_nm

logger = get_logger(__name__)


class SimulateRunUseCase:
    def __init__(self, repository: IArtifactRepository, threads: int = 1):
        self.repository = repository
        self.threads = max(int(threads), 1)

    def execute(
        self,
        run_config: RunConfig,
        gate_field: Optional[str] = None,
        prep_field: Optional[str] = None,
        kappas: Optional[Sequence[float]] = None,
    ) -> Dict[str, Any]:
        """
        Simulate the pulse sequence

        Args:
            run_config: Validated run configuration
            gate_field: Gate field CSV (overrides [simulation] gate_field)
            prep_field: Preparation field CSV; without it the packets are
                encoded onto the ion directly
            kappas: kappa values overriding the configuration

        Returns:
            Result dict with per-run periodicity residuals and final fidelities
        """
        result = new_result()
        config_hash = run_config.config_hash()
        try:
            gate_path = gate_field or run_config.simulation.gate_field
            if not gate_path:
                raise ConfigurationError("simulate needs a gate field (--field or [simulation] gate_field)")
            field = self.repository.read_field(gate_path)
            prep_path = prep_field or run_config.simulation.prep_field
            preparation = self.repository.read_field(prep_path) if prep_path else None

            basis = build_basis(run_config)
            grid = build_grid(run_config)
            gate = build_target_gate(run_config)
            kappa_values = resolve_kappas(run_config, kappas)

            models: List[Optional[DissipationModel]] = [None] + [
                build_dissipation(basis, kappa, run_config.dissipation.deltas, run_config.dissipation.all_dipole_pairs)
                for kappa in kappa_values
            ]
            labels = ["closed"] + [kappa_label(kappa) for kappa in kappa_values]

            with ThreadPoolExecutor(max_workers=self.threads) as pool:
                runs = list(pool.map(
                    lambda model: self._run_one(run_config, basis, grid, gate, field, preparation, model),
                    models,
                ))

            for label, run in zip(labels, runs):
                for name, frame in run["tables"].items():
                    result["outputs"].append(
                        str(self.repository.write_table(f"simulate/{label}/{name}.csv", frame, config_hash))
                    )
                result["outputs"].append(
                    str(self.repository.write_json(f"simulate/{label}/summary.json", run["summary"], config_hash))
                )
                result["summary"][label] = run["summary"]
            logger.info("Simulation stage finished: %d runs", len(runs))
        except SimulatorError as exc:
            logger.error("Simulation failed: %s", exc)
            return fail(result, exc)
        return result

    def _run_one(
        self,
        run_config: RunConfig,
        basis: EigenBasis,
        grid: Grid,
        gate: GateMatrix,
        field: ControlField,
        preparation: Optional[ControlField],
        model: Optional[DissipationModel],
    ) -> Dict[str, Any]:
        n_pulses = run_config.simulation.n_pulses
        size = basis.computational_size
        offset = preparation.t_pulse if preparation is not None else 0.0
        tables: Dict[str, pd.DataFrame] = {}
        summary: Dict[str, Any] = {"kappa_au": model.kappa if model is not None else 0.0, "packets": {}}

        for index, spec in enumerate(run_config.packets):
            label = packet_label(index)
            packet = build_packet(spec, grid)
            if preparation is None:
                initial = ion_state(encode(packet), basis.size)
            else:
                initial = QuantumState.basis_state(0, basis.size)
            states = simulate_pulses(initial, field, basis, n_pulses, model, preparation)

            ideal = classic_propagate(packet, gate, n_pulses)
            readouts = [readout_probabilities(state, size, grid.delta_x) for state in states]
            ideal_readouts = [packet.probabilities() for packet in ideal]

            times = offset + np.arange(n_pulses + 1) * field.t_pulse
            z_ion = [mean_position_ion(state, basis, t) for state, t in zip(states, times)]
            x_sim = [mean_position_sim(readout, grid) for readout in readouts]
            x_ideal = [mean_position_sim(readout, grid) for readout in ideal_readouts]

            tables[f"{label}_probabilities"] = pd.DataFrame([
                {"l": l, "j": j, "x_j": grid.points[j], "prob": readouts[l][j], "ideal_prob": ideal_readouts[l][j]}
                for l in range(n_pulses + 1)
                for j in range(size)
            ], columns=["l", "j", "x_j", "prob", "ideal_prob"])

            positions = pd.DataFrame({
                "l": np.arange(n_pulses + 1),
                "t_au": times,
                "z_ion_au": z_ion,
                "z_ion_nm": [length_to_nm(z) for z in z_ion],
                "x_sim": x_sim,
                "x_ideal": x_ideal,
            })
            if np.any(np.abs(x_ideal) > 0):
                positions["relative_error"] = relative_position_error(x_sim, x_ideal)
            tables[f"{label}_positions"] = positions

            populations = np.array([state.populations() for state in states])
            trajectory = pd.DataFrame(populations, columns=[f"p_{j}" for j in range(basis.size)])
            trajectory.insert(0, "t_au", times)
            trajectory.insert(0, "l", np.arange(n_pulses + 1))
            trajectory["norm"] = populations.sum(axis=1)
            tables[f"{label}_trajectory"] = trajectory

            packet_summary = {"final_register_population": float(populations[-1, :size].sum())}
            if n_pulses >= 10:
                packet_summary["periodicity_residual"] = periodicity_residual(readouts)
            summary["packets"][label] = packet_summary

        if n_pulses >= 1:
            values = fidelity_trace(field, basis, model, n_pulses, gate)
            tables["fidelity_trace"] = pd.DataFrame({"pulse": np.arange(1, n_pulses + 1), "fidelity": values})
            summary["final_fidelity"] = values[-1]
        return {"tables": tables, "summary": summary}
