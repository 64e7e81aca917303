"""
Tests for the run configuration

Covers tier presets, unit parsing, cross-section validation, the
configuration hash and loading TOML run files.
"""

import math

import pytest

from models.run_config import TIER_PRESETS, RunConfig
from tools.src.exceptions import ConfigurationError
from tools.src.units import AU_TIME_S

pytestmark = pytest.mark.unit


class TestFromDict:
    """Test suite for RunConfig.from_dict"""

    def test_empty_desk_config(self):
        config = RunConfig.from_dict({})
        assert config.tier == "desk"
        assert config.trap.dynamical_size == 8
        assert config.trap.computational_size == 4
        assert config.simulation.grid_points == 4
        assert config.control.n_steps == 20000
        assert config.simulation.delta_t == pytest.approx(2.0 * math.pi / 10.0)

    def test_paper_tier_needs_acknowledgment(self):
        with pytest.raises(ConfigurationError, match="acknowledge_long_running"):
            RunConfig.from_dict({}, tier="paper")

    def test_paper_tier_acknowledged(self):
        config = RunConfig.from_dict({}, tier="paper", acknowledge_long_running=True)
        assert config.trap.computational_size == 16
        assert config.control.t_pulse == pytest.approx(96e-6 / AU_TIME_S)
        assert config.control.fidelity_goal == pytest.approx(0.99999)

    def test_unknown_tier(self):
        with pytest.raises(ConfigurationError, match="Unknown tier"):
            RunConfig.from_dict({}, tier="cluster")

    def test_grid_must_match_register(self):
        with pytest.raises(ConfigurationError, match="register has"):
            RunConfig.from_dict({"simulation": {"grid_points": 8}})

    def test_sections_override_preset(self):
        config = RunConfig.from_dict({"control": {"max_iterations": 3, "functional": "F", "include_superposition_target": False}})
        assert config.control.max_iterations == 3
        assert config.control.functional == "F"
        assert config.control.dt == pytest.approx(2e-9 / AU_TIME_S)

    def test_preset_not_mutated(self):
        RunConfig.from_dict({"control": {"max_iterations": 3}})
        assert TIER_PRESETS["desk"]["control"]["max_iterations"] == 500

    def test_negative_kappa(self):
        with pytest.raises(ConfigurationError, match="non-negative"):
            RunConfig.from_dict({"dissipation": {"kappa": [1e-18, -1.0]}})

    def test_scalar_kappa_becomes_list(self):
        assert RunConfig.from_dict({"dissipation": {"kappa": 5e-18}}).dissipation.kappa == [5e-18]

    def test_filter_band_units(self):
        config = RunConfig.from_dict({"analysis": {"filter_band": ["0.5 MHz", "12 MHz"]}})
        assert config.analysis.filter_band == (pytest.approx(0.5e6), pytest.approx(12e6))

    def test_filter_band_needs_two_edges(self):
        with pytest.raises(ConfigurationError, match="exactly two"):
            RunConfig.from_dict({"analysis": {"filter_band": ["1 MHz"]}})

    def test_inverted_grid(self):
        with pytest.raises(ConfigurationError, match="x_min must be below x_max"):
            RunConfig.from_dict({"simulation": {"x_min": 4.0, "x_max": -4.0}})


class TestConfigHash:
    """Test suite for RunConfig.config_hash"""

    def test_stable(self):
        assert RunConfig.from_dict({}).config_hash() == RunConfig.from_dict({}).config_hash()

    def test_ignores_output_dir(self):
        first = RunConfig.from_dict({}, output_dir="a")
        second = RunConfig.from_dict({}, output_dir="b")
        assert first.config_hash() == second.config_hash()

    def test_tracks_physics(self):
        first = RunConfig.from_dict({})
        second = RunConfig.from_dict({"trap": {"k_quart": 0.0}})
        assert first.config_hash() != second.config_hash()


class TestFromToml:
    """Test suite for RunConfig.from_toml"""

    def test_desk_file(self, desk_config_path):
        config = RunConfig.from_toml(desk_config_path)
        assert config.tier == "desk"
        assert config.output_dir == "runs/desk"
        assert config.dissipation.kappa == [1e-18, 5e-18, 1e-17]
        assert config.control.checkpoint_every == 50

    def test_output_dir_override(self, desk_config_path, tmp_path):
        config = RunConfig.from_toml(desk_config_path, output_dir=tmp_path)
        assert config.output_dir == str(tmp_path)

    def test_paper_file_needs_acknowledgment(self, desk_config_path):
        paper = desk_config_path.parent / "paper.toml"
        with pytest.raises(ConfigurationError, match="acknowledge_long_running"):
            RunConfig.from_toml(paper)
        assert RunConfig.from_toml(paper, acknowledge_long_running=True).trap.dynamical_size == 32

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigurationError, match="not found"):
            RunConfig.from_toml(tmp_path / "missing.toml")

    def test_syntax_error(self, tmp_path):
        path = tmp_path / "broken.toml"
        path.write_text("tier = \n")
        with pytest.raises(ConfigurationError, match="Could not parse"):
            RunConfig.from_toml(path)

    def test_missing_field_file(self, tmp_path):
        path = tmp_path / "run.toml"
        path.write_text('[simulation]\ngate_field = "fields/gate.csv"\n')
        with pytest.raises(ConfigurationError, match="gate_field file not found"):
            RunConfig.from_toml(path)

    def test_field_file_resolved(self, tmp_path):
        (tmp_path / "gate.csv").write_text("t_au,E_au\n0,0\n")
        path = tmp_path / "run.toml"
        path.write_text('[simulation]\ngate_field = "gate.csv"\n')
        config = RunConfig.from_toml(path)
        assert config.simulation.gate_field == str((tmp_path / "gate.csv").resolve())
