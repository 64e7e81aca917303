"""
Tests for the optimize-field use case: checkpoints, resumption and guesses
"""

import numpy as np
import pytest

from app.application.use_cases.optimize_field import OptimizeFieldUseCase
from app.infrastructure.repositories.filesystem_artifact_repository import FilesystemArtifactRepository
from models.run_config import RunConfig
from tools.src.exceptions import ConfigurationError, ConvergenceError, StepSizeError

pytestmark = pytest.mark.integration


@pytest.fixture
def run_config():
    return RunConfig.from_dict({
        "control": {"t_pulse": "200 ns", "dt": "2 ns", "max_iterations": 2, "checkpoint_every": 1},
    })


@pytest.fixture
def repository(tmp_path):
    return FilesystemArtifactRepository(tmp_path)


class TestOptimizeFieldUseCase:
    """Test suite for OptimizeFieldUseCase"""

    def test_writes_checkpoints(self, run_config, repository):
        result = OptimizeFieldUseCase(repository).execute(run_config)
        assert result["exit_code"] == ConvergenceError.exit_code
        assert repository.exists("checkpoints/gate_P_field.csv")

        trace = repository.read_table("checkpoints/gate_P_trace.csv")
        assert list(trace["iteration"]) == [0, 1, 2]
        assert np.all(np.diff(trace["objective"]) >= -run_config.control.monotonic_tolerance)

    def test_resume_continues_numbering(self, run_config, repository):
        use_case = OptimizeFieldUseCase(repository)
        use_case.execute(run_config)
        checkpointed = repository.read_table("checkpoints/gate_P_trace.csv")

        result = use_case.execute(run_config, resume="checkpoints/gate_P_field.csv")
        trace = repository.read_table("optimize/gate_P_trace.csv")
        assert list(trace["iteration"]) == [0, 1, 2, 3, 4]
        assert trace["objective"].iloc[2] == pytest.approx(checkpointed["objective"].iloc[2], abs=1e-12)
        assert result["summary"]["gate_P"]["iterations"] == 4

    def test_guess_file(self, run_config, repository):
        use_case = OptimizeFieldUseCase(repository)
        use_case.execute(run_config)
        first = repository.read_table("optimize/gate_P_trace.csv")

        use_case.execute(run_config, guess="optimize/gate_P_field.csv")
        restarted = repository.read_table("optimize/gate_P_trace.csv")
        assert restarted["iteration"].iloc[0] == 0
        assert restarted["objective"].iloc[0] == pytest.approx(first["objective"].iloc[-1], abs=1e-12)

    def test_summary_contents(self, run_config, repository):
        result = OptimizeFieldUseCase(repository).execute(run_config)
        summary = result["summary"]["gate_P"]
        assert summary["converged"] is False
        assert summary["stop_reason"] == "iteration budget exhausted"
        assert 0.0 <= summary["unitary_fidelity"] <= 1.0
        assert repository.read_json("optimize/gate_P_summary.json")["config_hash"] == run_config.config_hash()

    def test_dissipative_per_kappa(self, repository):
        run_config = RunConfig.from_dict({
            "control": {"t_pulse": "200 ns", "dt": "2 ns", "max_iterations": 1},
        })
        result = OptimizeFieldUseCase(repository).execute(run_config, dissipative=True, kappas=[1e-18, 5e-18])
        assert set(result["summary"]) == {"gate_P_kappa1e-18", "gate_P_kappa5e-18"}
        assert repository.exists("optimize/gate_P_kappa5e-18_field.csv")

    def test_prep_is_closed_only(self, run_config, repository):
        result = OptimizeFieldUseCase(repository).execute(run_config, mode="prep", dissipative=True, kappas=[1e-18])
        assert result["exit_code"] == 2

    def test_resume_needs_a_single_kappa(self, run_config, repository):
        use_case = OptimizeFieldUseCase(repository)
        use_case.execute(run_config)
        result = use_case.execute(
            run_config, dissipative=True, kappas=[1e-18, 5e-18], resume="checkpoints/gate_P_field.csv"
        )
        assert result["exit_code"] == ConfigurationError.exit_code
        assert "single kappa" in result["errors"][0]
        assert not repository.exists("optimize/gate_P_kappa1e-18_field.csv")

    def test_field_kept_when_gate_diagnostics_fail(self, run_config, repository, monkeypatch):
        def lost_orthonormality(*args, **kwargs):
            raise StepSizeError("Propagated columns lost orthonormality by 1.1e-08; reduce the time step")

        monkeypatch.setattr("app.application.use_cases.optimize_field.evolution_operator", lost_orthonormality)
        result = OptimizeFieldUseCase(repository).execute(run_config)
        assert result["exit_code"] == StepSizeError.exit_code
        assert len(result["outputs"]) == 2
        assert repository.exists("optimize/gate_P_field.csv")
        assert list(repository.read_table("optimize/gate_P_trace.csv")["iteration"]) == [0, 1, 2]
