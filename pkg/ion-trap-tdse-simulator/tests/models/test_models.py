"""
Tests for the data models

Covers validation and derived quantities of the trap, dynamics and
optimal-control models.
"""

import numpy as np
import pytest
from pydantic import ValidationError

from models.control import OctConfig, OctIterationRecord, OctTrace, TargetSet
from models.dynamics import ControlField, DissipationModel, QuantumState, Trajectory
from models.eigen_basis import EigenBasis, TransitionLine
from models.simulation import GateMatrix, GridWavepacket, QubitAmplitudes
from models.trap_params import TrapParams
from tools.src.units import AU_FIELD_VPM, AU_TIME_S

pytestmark = pytest.mark.unit


class TestTrapParams:
    """Test suite for TrapParams"""

    def test_defaults(self):
        params = TrapParams()
        assert (params.primitive_size, params.dynamical_size, params.computational_size) == (50, 32, 16)
        assert params.k == pytest.approx(3.5828e-14)

    def test_size_ordering(self):
        with pytest.raises(ValidationError, match="0 < N <= D <= M"):
            TrapParams(dynamical_size=60)
        with pytest.raises(ValidationError, match="0 < N <= D <= M"):
            TrapParams(dynamical_size=8, computational_size=16)

    def test_accepts_au_suffix(self):
        assert TrapParams(k="3.5828e-14 au").k == pytest.approx(3.5828e-14)

    def test_frozen(self):
        with pytest.raises(ValidationError):
            TrapParams().k = 1.0


class TestEigenBasis:
    """Test suite for EigenBasis.from_levels and TransitionLine"""

    def test_from_levels(self, three_level_basis):
        assert three_level_basis.size == 3
        assert three_level_basis.omega == pytest.approx(1.0)
        assert three_level_basis.angular_frequency(1, 2) == pytest.approx(1.3)
        assert np.array_equal(three_level_basis.vectors, np.eye(3))

    def test_dipole_shape(self):
        with pytest.raises(ValueError, match="Dipole matrix must be 2x2"):
            EigenBasis.from_levels([0.0, 1.0], np.zeros((3, 3)), computational_size=2)

    def test_register_size(self):
        with pytest.raises(ValueError, match="computational_size"):
            EigenBasis.from_levels([0.0, 1.0], np.zeros((2, 2)), computational_size=3)

    def test_transition_delta(self):
        line = TransitionLine(j=2, k=5, frequency_hz=1e6, dipole_au=0.1)
        assert line.delta == 3


class TestControlField:
    """Test suite for ControlField"""

    def test_grid(self):
        field = ControlField.from_function(np.sin, 10.0, 100)
        assert field.n_steps == 100
        assert field.dt == pytest.approx(0.1)
        assert field.t_pulse == pytest.approx(10.0)
        assert field.times[-1] == pytest.approx(10.0)

    def test_fluence(self):
        field = ControlField(np.ones(11), 0.1)
        assert field.fluence() == pytest.approx(1.0)

    def test_peak_in_vpm(self):
        field = ControlField(np.array([0.0, -2.0, 1.0]), 1.0)
        assert field.peak_vpm() == pytest.approx(2.0 * AU_FIELD_VPM)

    def test_refined_keeps_samples(self):
        field = ControlField(np.array([0.0, 2.0, 4.0, 0.0]), 1.0)
        fine = field.refined()
        assert fine.n_steps == 6
        assert fine.dt == pytest.approx(0.5)
        assert np.allclose(fine.samples, [0.0, 1.0, 2.0, 3.0, 4.0, 2.0, 0.0])

    @pytest.mark.parametrize("samples,dt,message", [
        (np.array([1.0]), 1.0, "at least two samples"),
        (np.zeros(3), 0.0, "must be positive"),
        (np.array([0.0, np.nan]), 1.0, "non-finite"),
    ])
    def test_validation(self, samples, dt, message):
        with pytest.raises(ValueError, match=message):
            ControlField(samples, dt)


class TestQuantumState:
    """Test suite for QuantumState"""

    def test_basis_state(self):
        state = QuantumState.basis_state(2, 4)
        assert state.size == 4
        assert not state.is_density
        assert np.allclose(state.populations(), [0, 0, 1, 0])

    def test_density(self):
        state = QuantumState(np.array([0.6, 0.8j])).as_density()
        assert state.is_density
        assert state.norm() == pytest.approx(1.0)
        assert state.hermiticity_deviation() == pytest.approx(0.0)
        assert state.min_eigenvalue() == pytest.approx(0.0, abs=1e-12)
        assert np.allclose(state.populations(), [0.36, 0.64])

    def test_rejects_rectangular(self):
        with pytest.raises(ValueError, match="square"):
            QuantumState(np.zeros((2, 3)))

    def test_trajectory(self):
        states = np.array([[1.0, 0.0], [0.0, 1.0]], dtype=complex)
        trajectory = Trajectory(times=np.array([0.0, 1.0]), states=states)
        assert len(trajectory) == 2
        assert np.allclose(trajectory.final.data, [0.0, 1.0])
        assert np.allclose(trajectory.populations(), np.eye(2))


class TestDissipationModel:
    """Test suite for DissipationModel"""

    def test_heating_time(self):
        rates = np.array([[0.0, 2.0], [2.0, 0.0]])
        model = DissipationModel(kappa=1.0, pairs=((0, 1), (1, 0)), rates=rates, mean_rate=2.0)
        assert model.mean_heating_time == pytest.approx(0.5)
        assert model.mean_heating_time_s == pytest.approx(0.5 * AU_TIME_S)
        assert np.allclose(model.loss_rates, [2.0, 2.0])
        assert not model.is_closed

    def test_closed(self):
        model = DissipationModel(kappa=0.0, pairs=(), rates=np.zeros((2, 2)), mean_rate=0.0)
        assert model.is_closed
        assert model.mean_heating_time == float("inf")


class TestSimulationModels:
    """Test suite for gate matrices and qubit amplitudes"""

    def test_gate_unitarity(self):
        gate = GateMatrix(entries=np.array([[0, 1], [1, 0]], dtype=complex), delta_t=1.0)
        assert gate.unitarity_deviation() == pytest.approx(0.0)
        assert np.allclose(gate.power(2), np.eye(2))

    def test_qubit_amplitudes(self):
        amplitudes = QubitAmplitudes(c=np.array([0.6, 0.8]), delta_x=0.5)
        assert amplitudes.size == 2
        assert amplitudes.norm() == pytest.approx(1.0)

    def test_wavepacket_normalization(self):
        from tools.src.simulation_tools.grid_simulation import make_grid

        packet = GridWavepacket(np.ones(4, dtype=complex), make_grid(-1.0, 1.0, 4))
        assert packet.norm() == pytest.approx(2.0)
        assert packet.normalized().norm() == pytest.approx(1.0)


class TestOctConfig:
    """Test suite for OctConfig"""

    def test_parses_time_units(self):
        config = OctConfig(t_pulse="96 us", dt="960 ps", alpha0=1e15)
        assert config.n_steps == 100000
        assert config.t_pulse == pytest.approx(96e-6 / AU_TIME_S)

    def test_parses_field_amplitude(self):
        config = OctConfig(t_pulse=10.0, dt=0.1, alpha0=1.0, guess_amplitude="0.1 Vpm")
        assert config.guess_amplitude == pytest.approx(0.1 / AU_FIELD_VPM)

    def test_step_must_divide_pulse(self):
        with pytest.raises(ValidationError, match="integer multiple"):
            OctConfig(t_pulse=10.0, dt=0.3, alpha0=1.0)

    def test_p_needs_superposition(self):
        with pytest.raises(ValidationError, match="superposition"):
            OctConfig(t_pulse=10.0, dt=0.1, alpha0=1.0, functional="P", include_superposition_target=False)

    def test_f_without_superposition(self):
        config = OctConfig(t_pulse=10.0, dt=0.1, alpha0=1.0, functional="F", include_superposition_target=False)
        assert config.functional == "F"

    def test_unknown_functional(self):
        with pytest.raises(ValidationError):
            OctConfig(t_pulse=10.0, dt=0.1, alpha0=1.0, functional="G")

    def test_time_needs_unit(self):
        with pytest.raises(ValidationError, match="not a time unit"):
            OctConfig(t_pulse="96 Vpm", dt=0.1, alpha0=1.0)


class TestTargetSet:
    """Test suite for TargetSet"""

    def test_states(self):
        gate = GateMatrix(entries=np.array([[0, 1], [1, 0]], dtype=complex), delta_t=1.0)
        targets = TargetSet(gate)
        assert targets.n_targets == 3

        initial = targets.initial_states(4)
        final = targets.final_states(4)
        assert initial.shape == (4, 3)
        assert np.allclose(initial[:, 2], [1 / np.sqrt(2), 1 / np.sqrt(2), 0, 0])
        assert np.allclose(final[:, 0], [0, 1, 0, 0])
        assert np.allclose(final[:, 2], initial[:, 2])

    def test_without_superposition(self):
        gate = GateMatrix(entries=np.eye(2, dtype=complex), delta_t=1.0)
        assert TargetSet(gate, include_superposition=False).n_targets == 2

    def test_rejects_non_unitary(self):
        gate = GateMatrix(entries=np.array([[1, 1], [0, 1]], dtype=complex), delta_t=1.0)
        with pytest.raises(ValueError, match="not unitary"):
            TargetSet(gate)


class TestOctTrace:
    """Test suite for OctTrace"""

    def test_accessors(self):
        trace = OctTrace()
        assert trace.last is None
        assert trace.final_fidelity == 0.0

        trace.append(OctIterationRecord(iteration=0, objective=0.1, fidelity=0.05, fluence=1.0))
        trace.append(OctIterationRecord(iteration=1, objective=0.3, fidelity=0.2, fluence=1.5))
        assert np.allclose(trace.objectives, [0.1, 0.3])
        assert np.allclose(trace.fidelities, [0.05, 0.2])
        assert trace.final_fidelity == pytest.approx(0.2)
