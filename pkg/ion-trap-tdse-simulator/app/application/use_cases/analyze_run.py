"""
Analyze Run Use Case

Spectra of optimized fields, their line assignment, band-pass filtering
and the filter-then-reoptimize handoff.
SRP: Handles only the analysis stage.
DIP: Depends on IArtifactRepository, not on the filesystem.
"""

from pathlib import Path
from typing import Any, Dict, Optional, Sequence

import numpy as np
import pandas as pd

from app.application.dtos.run_result import fail, new_result
from app.application.use_cases.optimize_field import trace_frame
from app.domain.repositories.artifact_repository import IArtifactRepository
from app.domain.services.pipeline_service import (
    build_basis,
    build_target_gate,
    control_config,
    resolve_kappas,
)
from app.logging_config import get_logger
from models.run_config import RunConfig
from models.spectrum import Spectrum
from tools.src.analysis_computation_tools.pulse_spectrum import (
    bandpass_filter,
    default_filter_band,
    line_offsets,
    spectrum,
    spectrum_difference,
)
from tools.src.control_tools.optimal_control import filter_and_reoptimize, make_targets
from tools.src.exceptions import ConfigurationError, SimulatorError
from tools.src.propagation_tools.dissipation import build_dissipation
from tools.src.trap_tools.trap_model import transition_table

logger = get_logger(__name__)


def spectrum_frame(result: Spectrum) -> pd.DataFrame:
    return pd.DataFrame({"frequency_hz": result.frequencies, "power": result.power})


class AnalyzeRunUseCase:
    def __init__(self, repository: IArtifactRepository):
        self.repository = repository

    def execute(
        self,
        run_config: RunConfig,
        fields: Sequence[str],
        reoptimize: bool = False,
        functional: Optional[str] = None,
        kappas: Optional[Sequence[float]] = None,
    ) -> Dict[str, Any]:
        """
        Analyze one or more field files

        Args:
            run_config: Validated run configuration
            fields: Field CSV paths; with two or more, the spectrum of each
                later field is also compared with the first
            reoptimize: Filter the first field and optimize again from it
            functional: Functional of the re-optimization
            kappas: With reoptimize, re-optimize under the first kappa

        Returns:
            Result dict with line counts, band and filtered fidelities
        """
        result = new_result()
        config_hash = run_config.config_hash()
        try:
            if not fields:
                raise ConfigurationError("analyze needs at least one field file (--field)")
            basis = build_basis(run_config)
            lines = transition_table(basis, (1, 3))
            band = run_config.analysis.filter_band or default_filter_band(basis)
            result["summary"]["filter_band_hz"] = list(band)

            spectra = []
            for path in fields:
                name = Path(path).stem
                field = self.repository.read_field(path)
                field_spectrum = spectrum(field, run_config.analysis.peak_threshold)
                spectra.append((name, field_spectrum))

                offsets = line_offsets(field_spectrum, lines)
                peaks = pd.DataFrame({
                    "frequency_hz": field_spectrum.peak_frequencies,
                    "offset_bins": offsets if offsets.size else np.zeros(0),
                })
                filtered = bandpass_filter(field, band)
                result["outputs"] += [
                    str(self.repository.write_table(f"analyze/{name}_spectrum.csv", spectrum_frame(field_spectrum), config_hash)),
                    str(self.repository.write_table(f"analyze/{name}_peaks.csv", peaks, config_hash)),
                    str(self.repository.write_field(f"analyze/{name}_filtered_field.csv", filtered, config_hash)),
                ]
                result["summary"][name] = {
                    "peak_count": int(field_spectrum.peak_frequencies.size),
                    "max_offset_bins": float(np.max(offsets)) if offsets.size else 0.0,
                    "parseval_error": field_spectrum.parseval_error,
                    "fluence_au": field_spectrum.fluence,
                    "filtered_fluence_au": filtered.fluence(),
                }

            first_name, first = spectra[0]
            for name, other in spectra[1:]:
                frequencies, difference = spectrum_difference(other, first)
                frame = pd.DataFrame({"frequency_hz": frequencies, "power_difference": difference})
                result["outputs"].append(str(self.repository.write_table(
                    f"analyze/{name}_minus_{first_name}_spectrum.csv", frame, config_hash
                )))

            if reoptimize:
                result["summary"]["reoptimization"] = self._reoptimize(
                    run_config, basis, fields[0], band, functional, kappas, result, config_hash
                )

            result["outputs"].append(str(self.repository.write_json("analyze/summary.json", result["summary"], config_hash)))
        except SimulatorError as exc:
            logger.error("Analysis failed: %s", exc)
            return fail(result, exc)
        return result

    def _reoptimize(self, run_config, basis, path, band, functional, kappas, result, config_hash) -> Dict[str, Any]:
        config = control_config(run_config, functional)
        targets = make_targets(build_target_gate(run_config), config)
        kappa_values = resolve_kappas(run_config, kappas)
        model = None
        if kappa_values:
            model = build_dissipation(
                basis, kappa_values[0], run_config.dissipation.deltas, run_config.dissipation.all_dipole_pairs
            )

        handoff = filter_and_reoptimize(self.repository.read_field(path), band, basis, targets, config, model)
        name = Path(path).stem
        result["outputs"] += [
            str(self.repository.write_field(f"analyze/{name}_reoptimized_field.csv", handoff["field"], config_hash)),
            str(self.repository.write_table(f"analyze/{name}_reoptimized_trace.csv", trace_frame(handoff["trace"].records), config_hash)),
        ]
        return {
            "filtered_fidelity": handoff["filtered_fidelity"],
            "reoptimized_fidelity": handoff["trace"].final_fidelity,
            "converged": handoff["trace"].converged,
            "kappa_au": model.kappa if model is not None else 0.0,
        }
