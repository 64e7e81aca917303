"""
Propagator Tool

Closed-system ion dynamics in the interaction picture of H0:

    dc/dt = i E(t) mu_I(t) c,    mu_I(t)_jk = mu_jk exp(i (E_j - E_k) t)

integrated with fourth-order Runge-Kutta. Field values at the half steps
come from linear interpolation of the samples. The same stepping serves
amplitude vectors, column stacks (gates, optimizer ensembles) and, through
a different right-hand side, density matrices.
"""

import logging
from typing import Callable, Optional, Tuple

import numpy as np

from models.dynamics import ControlField, QuantumState, Trajectory
from models.eigen_basis import EigenBasis
from models.simulation import GateMatrix
from tools.src.exceptions import StepSizeError

logger = logging.getLogger(__name__)

NORM_TOLERANCE = 1e-8

Couplings = Tuple[np.ndarray, np.ndarray, np.ndarray]
Fields = Tuple[float, float, float]


class InteractionFrame:
    """Dipole coupling of a basis in the rotating frame of H0"""

    def __init__(self, basis: EigenBasis):
        self.size = basis.size
        self.dipole = np.asarray(basis.dipole, dtype=float)
        # a common energy offset only adds a global phase
        self.energies = basis.energies - basis.energies[0]

    def coupling(self, t: float) -> np.ndarray:
        """mu_I(t) = P mu P^*, P = diag(exp(i E_j t))"""
        phases = np.exp(1j * self.energies * t)
        return self.dipole * np.outer(phases, phases.conj())

    def step_couplings(self, t: float, dt: float) -> Couplings:
        return self.coupling(t), self.coupling(t + 0.5 * dt), self.coupling(t + dt)


def forward_fields(field: ControlField, midpoints: np.ndarray, n: int) -> Fields:
    """Field at t_n, t_n + dt/2 and t_{n+1}"""
    return field.samples[n], midpoints[n], field.samples[n + 1]


def backward_fields(field: ControlField, midpoints: np.ndarray, n: int) -> Fields:
    """Field at t_{n+1}, t_n + dt/2 and t_n for a step from t_{n+1} back to t_n"""
    return field.samples[n + 1], midpoints[n], field.samples[n]


def schrodinger_rhs(coupling: np.ndarray, field_value: float, states: np.ndarray) -> np.ndarray:
    return 1j * field_value * (coupling @ states)


def rk4_step(
    rhs: Callable[[np.ndarray, float, np.ndarray], np.ndarray],
    states: np.ndarray,
    couplings: Couplings,
    fields: Fields,
    dt: float,
) -> np.ndarray:
    """One classical RK4 step; dt may be negative for backward propagation"""
    start, middle, end = couplings
    e_start, e_middle, e_end = fields

    k1 = rhs(start, e_start, states)
    k2 = rhs(middle, e_middle, states + 0.5 * dt * k1)
    k3 = rhs(middle, e_middle, states + 0.5 * dt * k2)
    k4 = rhs(end, e_end, states + dt * k3)
    return states + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def propagate_columns(
    columns: np.ndarray,
    field: ControlField,
    frame: InteractionFrame,
    backward: bool = False,
) -> np.ndarray:
    """
    Propagate a stack of amplitude columns through the whole pulse

    Args:
        columns: (D,) or (D, n) amplitudes at t=0 (or at t_pulse when backward)
        field: Control field
        frame: Interaction frame of the basis
        backward: Integrate from t_pulse down to 0

    Returns:
        Columns at the other end of the pulse
    """
    midpoints = field.midpoints()
    states = np.array(columns, dtype=complex)
    dt = field.dt

    if backward:
        for n in range(field.n_steps - 1, -1, -1):
            couplings = frame.step_couplings((n + 1) * dt, -dt)
            states = rk4_step(schrodinger_rhs, states, couplings, backward_fields(field, midpoints, n), -dt)
    else:
        for n in range(field.n_steps):
            couplings = frame.step_couplings(n * dt, dt)
            states = rk4_step(schrodinger_rhs, states, couplings, forward_fields(field, midpoints, n), dt)
    return states


def propagate_tdse(
    state: QuantumState,
    field: ControlField,
    basis: EigenBasis,
    record_every: int = 1,
    tolerance: float = NORM_TOLERANCE,
) -> Trajectory:
    """
    Integrate the interaction-picture Schrodinger equation over one pulse

    Args:
        state: Normalized amplitude vector of length D
        field: Control field; its dt is the propagation step
        basis: Trap eigenbasis
        record_every: Store every n-th step (the final step is always stored)
        tolerance: Allowed norm drift over the pulse

    Returns:
        Trajectory of amplitude vectors

    Raises:
        ValueError: Density-matrix input, size mismatch or unnormalized state
        StepSizeError: Norm drift above tolerance
    """
    if state.is_density:
        raise ValueError("propagate_tdse expects an amplitude vector; use propagate_lindblad for density matrices")
    if state.size != basis.size:
        raise ValueError(f"State size {state.size} does not match basis size {basis.size}")
    if abs(state.norm() - 1.0) > tolerance:
        raise ValueError(f"Initial state is not normalized (norm {state.norm():.12f})")
    if record_every < 1:
        raise ValueError("record_every must be at least 1")

    frame = InteractionFrame(basis)
    midpoints = field.midpoints()
    dt = field.dt
    vector = state.data.copy()

    times, states = [0.0], [vector.copy()]
    for n in range(field.n_steps):
        couplings = frame.step_couplings(n * dt, dt)
        vector = rk4_step(schrodinger_rhs, vector, couplings, forward_fields(field, midpoints, n), dt)
        if (n + 1) % record_every == 0 or n + 1 == field.n_steps:
            times.append((n + 1) * dt)
            states.append(vector.copy())

    drift = abs(float(np.vdot(vector, vector).real) - state.norm())
    logger.debug("TDSE propagation over %d steps: norm drift %.2e", field.n_steps, drift)
    if drift > tolerance:
        raise StepSizeError(f"Norm drifted by {drift:.3e} over the pulse; reduce the time step")
    return Trajectory(times=np.array(times), states=np.array(states))


def full_evolution_operator(
    field: ControlField,
    basis: EigenBasis,
    tolerance: float = NORM_TOLERANCE,
) -> np.ndarray:
    """D x D interaction-picture propagator U(t_pulse) of one pulse"""
    frame = InteractionFrame(basis)
    unitary = propagate_columns(np.eye(basis.size, dtype=complex), field, frame)

    deviation = float(np.max(np.abs(unitary.conj().T @ unitary - np.eye(basis.size))))
    if deviation > tolerance:
        raise StepSizeError(f"Propagated columns lost orthonormality by {deviation:.3e}; reduce the time step")
    return unitary


def evolution_operator(field: ControlField, basis: EigenBasis, size: Optional[int] = None) -> GateMatrix:
    """
    Gate realized by a field: U_P = P U(t_pulse) P on the first N states

    The projection makes U_P sub-unitary when population leaks out of the
    register.
    """
    size = basis.computational_size if size is None else size
    if size > basis.size:
        raise ValueError(f"Register size {size} exceeds basis size {basis.size}")

    unitary = full_evolution_operator(field, basis)
    return GateMatrix(
        entries=unitary[:size, :size],
        delta_t=field.t_pulse,
        steps=field.n_steps,
        time_step=field.dt,
        label="realized",
    )
