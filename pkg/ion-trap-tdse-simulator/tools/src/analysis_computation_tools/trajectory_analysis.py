"""
Trajectory Analysis Tool

Runs the ion through a sequence of gate pulses and analyses the result:
mean positions of the ion and of the simulated packet, the gate fidelity
after every pulse under dissipation, the l <-> 10-l periodicity of
harmonic-benchmark read-outs and the heating times of a kappa sweep.
"""

import logging
from typing import Iterable, List, Optional, Sequence

import numpy as np
import pandas as pd

from models.dynamics import ControlField, DissipationModel, QuantumState
from models.eigen_basis import EigenBasis
from models.simulation import GateMatrix, Grid
from tools.src.propagation_tools.dissipation import (
    DEFAULT_DELTAS,
    build_dissipation,
    propagate_lindblad,
    propagate_operators,
    pulse_superoperator,
)
from tools.src.propagation_tools.propagator import InteractionFrame, full_evolution_operator
from tools.src.units import time_to_seconds

logger = logging.getLogger(__name__)

BENCHMARK_PERIOD = 10


def _schrodinger_phases(basis: EigenBasis, t: float) -> np.ndarray:
    return np.exp(-1j * (basis.energies - basis.energies[0]) * t)


def mean_position_ion(state: QuantumState, basis: EigenBasis, t: float = 0.0) -> float:
    """
    <z> of an interaction-picture state at time t, a.u. length

    The phases exp(-i E_j t) are restored before the expectation value
    sum_jk c_j* c_k z_jk (or Tr(rho z)) is taken.
    """
    if state.size != basis.size:
        raise ValueError(f"State size {state.size} does not match basis size {basis.size}")

    phases = _schrodinger_phases(basis, t)
    if state.is_density:
        rho = phases[:, None] * state.data * phases.conj()[None, :]
        return float(np.real(np.sum(rho * basis.z_matrix.T)))
    amplitudes = phases * state.data
    return float(np.real(np.vdot(amplitudes, basis.z_matrix @ amplitudes)))


def mean_position_sim(probabilities: np.ndarray, grid: Grid) -> float:
    """<x> = sum_j x_j |psi(x_j)|^2 dx"""
    probabilities = np.asarray(probabilities, dtype=float)
    if probabilities.shape[0] != grid.size:
        raise ValueError(f"{probabilities.shape[0]} probabilities do not fit a {grid.size}-point grid")
    return float(np.sum(grid.points * probabilities) * grid.delta_x)


def relative_position_error(simulated: Sequence[float], reference: Sequence[float]) -> np.ndarray:
    """|x_sim - x_ref| per pulse relative to the largest reference displacement"""
    simulated = np.asarray(simulated, dtype=float)
    reference = np.asarray(reference, dtype=float)
    if simulated.shape != reference.shape:
        raise ValueError("Position series differ in length")
    scale = float(np.max(np.abs(reference)))
    if scale == 0:
        raise ValueError("Reference positions are all zero")
    return np.abs(simulated - reference) / scale


def simulate_pulses(
    initial: QuantumState,
    gate_field: ControlField,
    basis: EigenBasis,
    n_pulses: int,
    model: Optional[DissipationModel] = None,
    prep_field: Optional[ControlField] = None,
) -> List[QuantumState]:
    """
    Apply the gate pulse n_pulses times, optionally after a preparation pulse

    Every pulse starts a new interaction frame, so the one-pulse map is
    simply iterated. Closed dynamics reuse the one-pulse propagator; with
    dissipation each pulse is a Lindblad propagation of the density matrix.

    Args:
        initial: Ion state before the pulses (before preparation, if given)
        gate_field: Optimized gate field
        basis: Trap eigenbasis
        n_pulses: Number of gate pulses
        model: Dissipation model (None for closed dynamics)
        prep_field: Field preparing the initial packet from `initial`

    Returns:
        States after l = 0..n_pulses gate pulses
    """
    if n_pulses < 0:
        raise ValueError("Number of pulses must be non-negative")

    open_system = model is not None and not model.is_closed
    state = initial.as_density() if open_system else initial

    def one_pulse(current: QuantumState, field: ControlField) -> QuantumState:
        if open_system:
            return propagate_lindblad(current, field, basis, model, record_every=field.n_steps).final
        return QuantumState(full_evolution_operator(field, basis) @ current.data)

    if prep_field is not None:
        state = one_pulse(state, prep_field)

    states = [state]
    unitary = None if open_system else full_evolution_operator(gate_field, basis)
    for l in range(n_pulses):
        if open_system:
            state = one_pulse(state, gate_field)
        else:
            state = QuantumState(unitary @ state.data)
        states.append(state)
        logger.debug("Pulse %d: register population %.10f", l + 1, np.sum(state.populations()[:basis.computational_size]))
    return states


def fidelity_trace(
    gate_field: ControlField,
    basis: EigenBasis,
    model: Optional[DissipationModel],
    n_pulses: int,
    target: GateMatrix,
) -> List[float]:
    """
    Gate fidelity of the cumulative map after each pulse l = 1..n_pulses

    F_l = (1/N^2) sum_{j,k<N} <phi_j| Phi^l(|j><k|) |phi_k>, phi_j = U_s^l |j>,
    which reduces to |Tr(U_s^l^dagger U_P^l)|^2/N^2 for a unitary channel.
    """
    if n_pulses < 1:
        raise ValueError("At least one pulse is required")
    size = target.size
    dimension = basis.size
    if size > dimension:
        raise ValueError(f"Target size {size} exceeds basis size {dimension}")

    pairs = np.arange(size * size)
    operators = np.zeros((size * size, dimension, dimension), dtype=complex)
    operators[pairs, pairs // size, pairs % size] = 1.0

    # one D^2 propagation builds the pulse channel; N^2 propagations per pulse otherwise
    superoperator = None
    if size * size * n_pulses > dimension * dimension:
        superoperator = pulse_superoperator(gate_field, basis, model)
    frame = InteractionFrame(basis)

    values = []
    ideal = np.eye(size, dtype=complex)
    for l in range(1, n_pulses + 1):
        if superoperator is not None:
            flat = superoperator @ operators.reshape(size * size, dimension * dimension).T
            operators = flat.T.reshape(size * size, dimension, dimension)
        else:
            operators = propagate_operators(operators, gate_field, frame, model)

        ideal = target.entries @ ideal
        images = np.zeros((dimension, size), dtype=complex)
        images[:size] = ideal
        blocks = operators.reshape(size, size, dimension, dimension)
        value = np.einsum('aj,jkab,bk->', images.conj(), blocks, images) / size ** 2
        values.append(float(np.real(value)))
        logger.info("Pulse %d: fidelity %.8f", l, values[-1])
    return values


def periodicity_residual(probabilities: Sequence[np.ndarray], period: int = BENCHMARK_PERIOD) -> float:
    """
    max over l < period/2 of max |p_l - p_{period-l}|

    Args:
        probabilities: Read-out probability vectors after l = 0..period pulses

    Raises:
        ValueError: Fewer than period+1 read-outs
    """
    if len(probabilities) < period + 1:
        raise ValueError(f"Need {period + 1} read-outs, got {len(probabilities)}")
    return float(max(
        np.max(np.abs(np.asarray(probabilities[l]) - np.asarray(probabilities[period - l])))
        for l in range(period // 2)
    ))


def heating_time_table(
    basis: EigenBasis,
    kappas: Iterable[float],
    deltas: Iterable[int] = DEFAULT_DELTAS,
    all_dipole_pairs: bool = False,
) -> pd.DataFrame:
    """Mean heating rate and time 1/gamma for each kappa"""
    rows = []
    for kappa in kappas:
        model = build_dissipation(basis, kappa, deltas, all_dipole_pairs)
        rows.append({
            "kappa_au": float(kappa),
            "mean_rate_au": model.mean_rate,
            "heating_time_au": model.mean_heating_time,
            "heating_time_ms": time_to_seconds(model.mean_heating_time) * 1e3,
        })
    return pd.DataFrame(rows, columns=["kappa_au", "mean_rate_au", "heating_time_au", "heating_time_ms"])
