"""
Dissipation Tool

Phenomenological heating by electrode noise: transition operators
L_jk = sqrt(gamma_jk) |j><k| with gamma_jk = kappa |mu_jk|, and the Lindblad
equation

    drho/dt = i E(t) [mu_I(t), rho] + L_D rho

For transition operators the dissipator only feeds populations and damps
coherences, so it has the same form in the eigenbasis and in the
interaction frame:

    (L_D rho)_ab = delta_ab sum_k gamma_ak rho_kk - (Gamma_a + Gamma_b)/2 rho_ab
"""

import logging
from typing import Iterable, Optional

import numpy as np

from models.dynamics import ControlField, DissipationModel, QuantumState, Trajectory
from models.eigen_basis import EigenBasis
from tools.src.exceptions import StepSizeError
from tools.src.units import time_to_seconds

from .propagator import InteractionFrame, backward_fields, forward_fields, rk4_step

logger = logging.getLogger(__name__)

TRACE_TOLERANCE = 1e-8
HERMITICITY_TOLERANCE = 1e-10
POSITIVITY_TOLERANCE = 1e-6
DENSITY_CHECK_EVERY = 10
DEFAULT_DELTAS = (1, 3)


def build_dissipation(
    basis: EigenBasis,
    kappa: float,
    deltas: Iterable[int] = DEFAULT_DELTAS,
    all_dipole_pairs: bool = False,
    averaging_size: Optional[int] = None,
) -> DissipationModel:
    """
    Build heating rates gamma_jk = kappa |mu_jk|

    Args:
        basis: Trap eigenbasis
        kappa: Rate scale, a.u. (>= 0)
        deltas: |j-k| values of the coupled pairs (default 1 and 3)
        all_dipole_pairs: Use every pair with a nonzero dipole instead
        averaging_size: States entering the mean rate (default: the
            computational register N)

    Returns:
        DissipationModel with the rate matrix over all j, k < D and the mean
        rate over the Delta nu = +-1, +-3 pairs among the averaged states
    """
    if kappa < 0:
        raise ValueError("kappa must be non-negative")

    size = basis.size
    steps = {abs(int(d)) for d in deltas}
    magnitude = np.abs(basis.dipole)

    pairs = []
    for j in range(size):
        for k in range(size):
            if j == k:
                continue
            if all_dipole_pairs:
                if magnitude[j, k] > 0:
                    pairs.append((j, k))
            elif abs(j - k) in steps:
                pairs.append((j, k))

    rates = np.zeros((size, size))
    for j, k in pairs:
        rates[j, k] = kappa * magnitude[j, k]

    averaging_size = basis.computational_size if averaging_size is None else min(averaging_size, size)
    averaged = [
        rates[j, k] for j, k in pairs
        if j < averaging_size and k < averaging_size and abs(j - k) in steps
    ]
    mean_rate = float(np.mean(averaged)) if averaged else 0.0

    model = DissipationModel(kappa=float(kappa), pairs=tuple(pairs), rates=rates, mean_rate=mean_rate)
    if mean_rate > 0:
        logger.info(
            "Dissipation model: kappa=%.3e a.u., %d pairs, mean heating time %.4g ms",
            kappa, len(pairs), time_to_seconds(model.mean_heating_time) * 1e3,
        )
    return model


def dissipator(model: DissipationModel, rho: np.ndarray) -> np.ndarray:
    """L_D rho for a single matrix (D, D) or a stack (n, D, D)"""
    loss = model.loss_rates
    populations = np.diagonal(rho, axis1=-2, axis2=-1)
    result = -0.5 * (loss[:, None] + loss[None, :]) * rho
    gain = populations @ model.rates.T
    indices = np.arange(model.rates.shape[0])
    result[..., indices, indices] += gain
    return result


def adjoint_dissipator(model: DissipationModel, operator: np.ndarray) -> np.ndarray:
    """L_D^dagger X with respect to the Hilbert-Schmidt product Tr(X^dagger rho)"""
    loss = model.loss_rates
    diagonal = np.diagonal(operator, axis1=-2, axis2=-1)
    result = -0.5 * (loss[:, None] + loss[None, :]) * operator
    gain = diagonal @ model.rates
    indices = np.arange(model.rates.shape[0])
    result[..., indices, indices] += gain
    return result


def liouville_rhs(model: Optional[DissipationModel]):
    """Right-hand side i E [mu_I, rho] + L_D rho"""
    def rhs(coupling: np.ndarray, field_value: float, rho: np.ndarray) -> np.ndarray:
        result = 1j * field_value * (coupling @ rho - rho @ coupling)
        if model is not None and not model.is_closed:
            result = result + dissipator(model, rho)
        return result
    return rhs


def costate_rhs(model: Optional[DissipationModel]):
    """Right-hand side of the adjoint equation i E [mu_I, eta] - L_D^dagger eta"""
    def rhs(coupling: np.ndarray, field_value: float, eta: np.ndarray) -> np.ndarray:
        result = 1j * field_value * (coupling @ eta - eta @ coupling)
        if model is not None and not model.is_closed:
            result = result - adjoint_dissipator(model, eta)
        return result
    return rhs


def propagate_operators(
    operators: np.ndarray,
    field: ControlField,
    frame: InteractionFrame,
    model: Optional[DissipationModel],
    backward: bool = False,
) -> np.ndarray:
    """
    Propagate a stack of operators (n, D, D) through one pulse

    Forward integration uses the Lindblad equation; backward integration
    uses the adjoint (costate) equation from t_pulse down to 0.
    """
    midpoints = field.midpoints()
    values = np.array(operators, dtype=complex)
    dt = field.dt

    if backward:
        rhs = costate_rhs(model)
        for n in range(field.n_steps - 1, -1, -1):
            couplings = frame.step_couplings((n + 1) * dt, -dt)
            values = rk4_step(rhs, values, couplings, backward_fields(field, midpoints, n), -dt)
    else:
        rhs = liouville_rhs(model)
        for n in range(field.n_steps):
            couplings = frame.step_couplings(n * dt, dt)
            values = rk4_step(rhs, values, couplings, forward_fields(field, midpoints, n), dt)
    return values


def _check_density(rho: np.ndarray, reference_trace: float) -> None:
    trace_drift = abs(float(np.real(np.trace(rho))) - reference_trace)
    if trace_drift > TRACE_TOLERANCE:
        raise StepSizeError(f"Trace drifted by {trace_drift:.3e}; reduce the time step")
    hermiticity = float(np.max(np.abs(rho - rho.conj().T)))
    if hermiticity > HERMITICITY_TOLERANCE:
        raise StepSizeError(f"Density matrix lost Hermiticity ({hermiticity:.3e})")
    lowest = float(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[0])
    if lowest < -POSITIVITY_TOLERANCE:
        raise StepSizeError(f"Density matrix lost positivity (eigenvalue {lowest:.3e})")


def propagate_lindblad(
    rho: QuantumState,
    field: ControlField,
    basis: EigenBasis,
    model: Optional[DissipationModel],
    record_every: int = 1,
    check_every: int = DENSITY_CHECK_EVERY,
) -> Trajectory:
    """
    Integrate the Lindblad equation over one pulse with RK4

    Args:
        rho: Valid density matrix (D, D); a vector is converted to |c><c|
        field: Control field; its dt is the propagation step
        basis: Trap eigenbasis
        model: Dissipation model (None or kappa = 0 gives closed dynamics)
        record_every: Store every n-th step (the final step is always stored)
        check_every: Check trace, Hermiticity and positivity every n-th step;
            recorded steps are always checked

    Returns:
        Trajectory of density matrices

    Raises:
        ValueError: Invalid initial density matrix
        StepSizeError: Trace, Hermiticity or positivity breach on a checked step
    """
    state = rho.as_density()
    if state.size != basis.size:
        raise ValueError(f"State size {state.size} does not match basis size {basis.size}")
    if abs(state.norm() - 1.0) > TRACE_TOLERANCE:
        raise ValueError(f"Initial density matrix has trace {state.norm():.12f}")
    if state.hermiticity_deviation() > HERMITICITY_TOLERANCE:
        raise ValueError("Initial density matrix is not Hermitian")
    if state.min_eigenvalue() < -TRACE_TOLERANCE:
        raise ValueError("Initial density matrix is not positive")
    if record_every < 1 or check_every < 1:
        raise ValueError("record_every and check_every must be at least 1")

    frame = InteractionFrame(basis)
    rhs = liouville_rhs(model)
    midpoints = field.midpoints()
    dt = field.dt
    matrix = state.data.copy()

    times, states = [0.0], [matrix.copy()]
    for n in range(field.n_steps):
        couplings = frame.step_couplings(n * dt, dt)
        matrix = rk4_step(rhs, matrix, couplings, forward_fields(field, midpoints, n), dt)
        recorded = (n + 1) % record_every == 0 or n + 1 == field.n_steps
        if recorded or (n + 1) % check_every == 0:
            _check_density(matrix, 1.0)
        if recorded:
            times.append((n + 1) * dt)
            states.append(matrix.copy())

    logger.debug("Lindblad propagation over %d steps: final trace %.12f", field.n_steps, np.real(np.trace(matrix)))
    return Trajectory(times=np.array(times), states=np.array(states))


def pulse_superoperator(
    field: ControlField,
    basis: EigenBasis,
    model: Optional[DissipationModel],
) -> np.ndarray:
    """
    One-pulse map as a D^2 x D^2 matrix acting on row-major vec(rho)

    Column a*D + b is the image of |a><b|.
    """
    size = basis.size
    units = np.zeros((size * size, size, size), dtype=complex)
    units[np.arange(size * size), np.repeat(np.arange(size), size), np.tile(np.arange(size), size)] = 1.0
    images = propagate_operators(units, field, InteractionFrame(basis), model)
    return images.reshape(size * size, size * size).T
