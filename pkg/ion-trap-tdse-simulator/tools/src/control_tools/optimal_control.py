"""
Optimal Control Tool

Monotonically convergent multi-target optimization of the control field.

Each iteration propagates the costates backward from their targets under
the current field, then sweeps forward while updating the field at every
time step from the overlap of states and costates:

    P:  dE = -(1/alpha) Im sum_j <psi_j|lambda_j><lambda_j|mu_I|psi_j>
    F:  dE = -(1/alpha) Im [sum_j <psi_j|lambda_j>][sum_k <lambda_k|mu_I|psi_k>]

With dissipation the states and costates are density matrices and the
scalar products become Tr(eta^dagger rho); the update reads
dE = -(1/2 alpha) Im sum Tr(eta^dagger [mu_I, rho]). The penalty
alpha(t) = alpha0/sin^2(pi t/t_pulse) switches the update off at both ends.

The recorded objective is the normalized terminal objective of the field
returned for that iteration; it never decreases.
"""

import logging
from typing import Callable, Dict, Optional, Tuple

import numpy as np

from models.control import OctConfig, OctIterationRecord, OctTrace, TargetSet
from models.dynamics import ControlField, DissipationModel
from models.eigen_basis import EigenBasis
from models.simulation import GateMatrix, QubitAmplitudes
from tools.src.analysis_computation_tools.pulse_spectrum import bandpass_filter
from tools.src.exceptions import AlgorithmicFaultError, ConfigurationError, StepSizeError
from tools.src.propagation_tools.dissipation import (
    POSITIVITY_TOLERANCE,
    TRACE_TOLERANCE,
    costate_rhs,
    liouville_rhs,
    propagate_operators,
)
from tools.src.propagation_tools.propagator import (
    NORM_TOLERANCE,
    InteractionFrame,
    forward_fields,
    propagate_columns,
    rk4_step,
    schrodinger_rhs,
)

from .guess_field import make_guess_field

logger = logging.getLogger(__name__)

Checkpoint = Callable[[ControlField, OctTrace], None]


def penalty(t: float, config: OctConfig) -> float:
    """alpha(t) = alpha0 / sin^2(pi t / t_pulse); infinite at both ends"""
    if t < 0 or t > config.t_pulse:
        raise ValueError(f"t={t} lies outside the pulse [0, {config.t_pulse}]")
    weight = np.sin(np.pi * t / config.t_pulse) ** 2
    if t == 0 or t == config.t_pulse or weight == 0:
        return float('inf')
    return float(config.alpha0 / weight)


def update_factors(config: OctConfig) -> np.ndarray:
    """1/alpha(t_n) on the time grid, clamped to exactly zero at both ends"""
    times = np.arange(config.n_steps + 1) * config.dt
    factors = np.sin(np.pi * times / config.t_pulse) ** 2 / config.alpha0
    factors[0] = 0.0
    factors[-1] = 0.0
    return factors


def fidelity(target, realized) -> float:
    """
    Gate fidelity |Tr(U_s^dagger U_P)|^2 / N^2

    Invariant under a global phase of U_P and sensitive to relative phases.
    """
    target = target.entries if isinstance(target, GateMatrix) else np.asarray(target)
    realized = realized.entries if isinstance(realized, GateMatrix) else np.asarray(realized)
    if target.shape != realized.shape:
        raise ValueError(f"Gate shapes differ: {target.shape} vs {realized.shape}")

    size = target.shape[0]
    value = abs(np.trace(target.conj().T @ realized)) ** 2 / size ** 2
    return float(min(max(value, 0.0), 1.0))


def phase_spread(target, realized) -> float:
    """Largest deviation of arg <U_s j|U_P j> from that of j = 0, in radians"""
    target = target.entries if isinstance(target, GateMatrix) else np.asarray(target)
    realized = realized.entries if isinstance(realized, GateMatrix) else np.asarray(realized)

    overlaps = np.sum(target.conj() * realized, axis=0)
    relative = np.angle(overlaps * np.conj(overlaps[0]))
    return float(np.max(np.abs(relative)))


def make_targets(gate: GateMatrix, config: OctConfig) -> TargetSet:
    """Target set for a functional: the superposition pair is attached to P only"""
    return TargetSet(gate=gate, include_superposition=config.functional == "P")


class _ClosedEnsemble:
    """State vectors |psi_j> and costates |lambda_j> of the closed problem"""

    def __init__(self, basis: EigenBasis, initial: np.ndarray, final: np.ndarray, functional: str, register_size: int):
        self.frame = InteractionFrame(basis)
        self.initial = initial
        self.final = final
        self.functional = functional
        self.register_size = register_size

    def costates_at_start(self, field: ControlField) -> np.ndarray:
        return propagate_columns(self.final, field, self.frame, backward=True)

    def scores(self, costates: np.ndarray) -> Tuple[float, float]:
        # <lambda_j(0)|psi_j(0)> = <target_j|U|psi_j(0)>
        overlaps = np.sum(costates.conj() * self.initial, axis=0)
        size = self.register_size
        gate_fidelity = float(abs(overlaps[:size].sum()) ** 2 / size ** 2)
        if self.functional == "F":
            return gate_fidelity, gate_fidelity
        return float(np.mean(np.abs(overlaps) ** 2)), gate_fidelity

    def _gradient(self, coupling: np.ndarray, states: np.ndarray, costates: np.ndarray) -> float:
        state_costate = np.sum(states.conj() * costates, axis=0)
        costate_dipole_state = np.sum(costates.conj() * (coupling @ states), axis=0)
        if self.functional == "F":
            return float(np.imag(state_costate.sum() * costate_dipole_state.sum()))
        return float(np.imag(np.sum(state_costate * costate_dipole_state)))

    def sweep(self, field: ControlField, costates: np.ndarray, factors: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Updated field samples and the forward states at t_pulse"""
        samples = field.samples.copy()
        midpoints = field.midpoints()
        states = self.initial.astype(complex)
        costates = costates.copy()
        dt = field.dt

        for n in range(field.n_steps):
            couplings = self.frame.step_couplings(n * dt, dt)
            delta = -factors[n] * self._gradient(couplings[0], states, costates)
            samples[n] = field.samples[n] + delta

            old_fields = forward_fields(field, midpoints, n)
            new_fields = tuple(value + delta for value in old_fields)
            costates = rk4_step(schrodinger_rhs, costates, couplings, old_fields, dt)
            states = rk4_step(schrodinger_rhs, states, couplings, new_fields, dt)

        return samples, states

    def validate(self, states: np.ndarray) -> None:
        drift = float(np.max(np.abs(np.sum(np.abs(states) ** 2 - np.abs(self.initial) ** 2, axis=0))))
        if drift > NORM_TOLERANCE:
            raise StepSizeError(f"norm drifted by {drift:.3e}; reduce the time step")


class _OpenEnsemble:
    """Density matrices rho and costate operators eta of the dissipative problem"""

    def __init__(self, basis: EigenBasis, targets: TargetSet, functional: str, model: DissipationModel):
        self.frame = InteractionFrame(basis)
        self.model = model
        self.functional = functional
        dimension = basis.size
        size = targets.size
        self.register_size = size

        finals = targets.final_states(dimension)
        images = finals[:, :size]
        # eta_jk(t_pulse) = |phi_j><phi_k| for all j, k < N
        operators = np.einsum('aj,bk->jkab', images, images.conj()).reshape(size * size, dimension, dimension)
        units = np.zeros((size * size, dimension, dimension), dtype=complex)
        pairs = np.arange(size * size)
        units[pairs, pairs // size, pairs % size] = 1.0

        self.superposition = functional == "P" and targets.include_superposition
        if self.superposition:
            start = targets.initial_states(dimension)[:, size]
            image = finals[:, size]
            operators = np.concatenate([operators, np.outer(image, image.conj())[None]])
            self.superposition_start = np.outer(start, start.conj())
        self.final = operators
        self.units = units

        diagonal = np.arange(size) * (size + 1)
        if functional == "F":
            self.sweep_index = pairs
            self.initial = units
            self.density_members = diagonal
        else:
            self.sweep_index = np.concatenate([diagonal, [size * size]]) if self.superposition else diagonal
            initial = units[diagonal]
            if self.superposition:
                initial = np.concatenate([initial, self.superposition_start[None]])
            self.initial = initial
            self.density_members = np.arange(initial.shape[0])

    def costates_at_start(self, field: ControlField) -> np.ndarray:
        return propagate_operators(self.final, field, self.frame, self.model, backward=True)

    def scores(self, costates: np.ndarray) -> Tuple[float, float]:
        size = self.register_size
        # Tr(eta_jk(0)^dagger |j><k|) = conj(eta_jk(0)[j, k])
        pairs = np.arange(size * size)
        terms = np.conj(costates[pairs, pairs // size, pairs % size]).reshape(size, size)
        gate_fidelity = float(np.real(terms.sum()) / size ** 2)
        if self.functional == "F":
            return gate_fidelity, gate_fidelity

        probabilities = list(np.real(np.diag(terms)))
        if self.superposition:
            probabilities.append(float(np.real(np.sum(np.conj(costates[-1]) * self.superposition_start))))
        return float(np.mean(probabilities)), gate_fidelity

    def sweep(self, field: ControlField, costates: np.ndarray, factors: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        samples = field.samples.copy()
        midpoints = field.midpoints()
        states = self.initial.copy()
        costates = costates[self.sweep_index].copy()
        state_rhs = liouville_rhs(self.model)
        adjoint_rhs = costate_rhs(self.model)
        dt = field.dt

        for n in range(field.n_steps):
            couplings = self.frame.step_couplings(n * dt, dt)
            coupling = couplings[0]
            commutator = coupling @ states - states @ coupling
            gradient = float(np.imag(np.sum(costates.conj() * commutator)))
            delta = -0.5 * factors[n] * gradient
            samples[n] = field.samples[n] + delta

            old_fields = forward_fields(field, midpoints, n)
            new_fields = tuple(value + delta for value in old_fields)
            costates = rk4_step(adjoint_rhs, costates, couplings, old_fields, dt)
            states = rk4_step(state_rhs, states, couplings, new_fields, dt)

        return samples, states

    def validate(self, states: np.ndarray) -> None:
        # Tr L(X) = 0 holds for |j><k| as well as for density matrices
        drift = float(np.max(np.abs(np.trace(states - self.initial, axis1=1, axis2=2))))
        if drift > TRACE_TOLERANCE:
            raise StepSizeError(f"trace drifted by {drift:.3e}; reduce the time step")
        densities = states[self.density_members]
        lowest = float(np.min(np.linalg.eigvalsh(0.5 * (densities + np.conj(np.swapaxes(densities, 1, 2))))))
        if lowest < -POSITIVITY_TOLERANCE:
            raise StepSizeError(f"density matrix lost positivity (eigenvalue {lowest:.3e}); reduce the time step")


def _check_field(field: ControlField, config: OctConfig) -> None:
    if field.n_steps != config.n_steps or not np.isclose(field.dt, config.dt, rtol=1e-9):
        raise ConfigurationError(
            f"Field grid ({field.n_steps} steps of {field.dt:.6g}) does not match the optimizer "
            f"grid ({config.n_steps} steps of {config.dt:.6g})"
        )


def _iterate(
    ensemble,
    guess: ControlField,
    config: OctConfig,
    label: str,
    start_iteration: int = 0,
    checkpoint: Optional[Checkpoint] = None,
    previous_objective: Optional[float] = None,
) -> Tuple[ControlField, OctTrace]:
    _check_field(guess, config)
    factors = update_factors(config)
    trace = OctTrace()
    field = guess
    iteration = start_iteration
    updates = 0
    stagnant = 0

    while True:
        costates = ensemble.costates_at_start(field)
        objective, gate_fidelity = ensemble.scores(costates)
        trace.append(OctIterationRecord(
            iteration=iteration,
            objective=objective,
            fidelity=gate_fidelity,
            fluence=field.fluence(),
        ))

        if previous_objective is not None:
            if objective < previous_objective - config.monotonic_tolerance:
                raise AlgorithmicFaultError(
                    f"{label}: objective decreased from {previous_objective:.12f} to {objective:.12f} "
                    f"at iteration {iteration}"
                )
            improvement = (objective - previous_objective) / max(abs(previous_objective), 1e-300)
            stagnant = stagnant + 1 if improvement < config.stagnation_tolerance else 0

        if iteration % config.log_every == 0:
            logger.info(
                "%s iteration %d: J=%.10f F=%.10f fluence=%.4e",
                label, iteration, objective, gate_fidelity, field.fluence(),
            )
        if checkpoint is not None and config.checkpoint_every and updates and iteration % config.checkpoint_every == 0:
            checkpoint(field, trace)

        if gate_fidelity >= config.fidelity_goal:
            trace.converged = True
            trace.stop_reason = "fidelity goal reached"
            break
        if updates >= config.max_iterations:
            trace.stop_reason = "iteration budget exhausted"
            break
        if stagnant >= config.stagnation_window:
            trace.stop_reason = "objective stagnated"
            logger.warning("%s stopped at iteration %d: objective stagnated", label, iteration)
            break

        samples, states = ensemble.sweep(field, costates, factors)
        if not np.all(np.isfinite(samples)):
            raise AlgorithmicFaultError(f"{label}: field update produced non-finite values at iteration {iteration + 1}")
        try:
            ensemble.validate(states)
        except StepSizeError as exc:
            raise StepSizeError(f"{label}: {exc} (sweep to iteration {iteration + 1})") from exc
        field = ControlField(samples, field.dt)
        previous_objective = objective
        updates += 1
        iteration += 1

    logger.info(
        "%s finished after %d updates (%s): J=%.10f F=%.10f",
        label, updates, trace.stop_reason, trace.last.objective, trace.last.fidelity,
    )
    return field, trace


def optimize_gate(
    basis: EigenBasis,
    targets: TargetSet,
    config: OctConfig,
    guess: Optional[ControlField] = None,
    start_iteration: int = 0,
    checkpoint: Optional[Checkpoint] = None,
    previous_objective: Optional[float] = None,
) -> Tuple[ControlField, OctTrace]:
    """
    Optimize the field realizing the target gate on the register

    Args:
        basis: Trap eigenbasis (D states)
        targets: Gate transitions; functional P needs the superposition pair
        config: Optimizer configuration
        guess: Starting field (defaults to the multi-line guess field)
        start_iteration: Number of the first recorded iteration (resumed runs)
        checkpoint: Called with (field, trace) every config.checkpoint_every iterations
        previous_objective: Objective of the iteration before start_iteration

    Returns:
        (optimized field, trace with one record per iteration)

    Raises:
        ConfigurationError: Inconsistent targets or field grid
        AlgorithmicFaultError: Loss of monotonicity or non-finite field
    """
    if targets.size > basis.size:
        raise ConfigurationError(f"Register size {targets.size} exceeds basis size {basis.size}")
    if config.functional == "P" and not targets.include_superposition:
        raise ConfigurationError("Functional P needs the superposition target")

    guess = make_guess_field(basis, config) if guess is None else guess
    initial = targets.initial_states(basis.size)
    final = targets.final_states(basis.size)
    if config.functional == "F":
        initial, final = initial[:, :targets.size], final[:, :targets.size]

    ensemble = _ClosedEnsemble(basis, initial, final, config.functional, targets.size)
    return _iterate(ensemble, guess, config, f"gate/{config.functional}", start_iteration, checkpoint, previous_objective)


def optimize_state_prep(
    basis: EigenBasis,
    target_state: QubitAmplitudes,
    config: OctConfig,
    guess: Optional[ControlField] = None,
    start_iteration: int = 0,
    checkpoint: Optional[Checkpoint] = None,
    previous_objective: Optional[float] = None,
) -> Tuple[ControlField, OctTrace]:
    """
    Optimize the field preparing an encoded packet from the ground state

    The objective is the population overlap |<target|psi(t_pulse)>|^2 in the
    interaction frame; it is also reported as the fidelity.
    """
    if target_state.size > basis.size:
        raise ConfigurationError(f"Target has {target_state.size} amplitudes, basis only {basis.size}")
    if abs(target_state.norm() - 1.0) > 1e-8:
        raise ConfigurationError("Target state must be normalized")

    initial = np.zeros((basis.size, 1), dtype=complex)
    initial[0, 0] = 1.0
    final = np.zeros((basis.size, 1), dtype=complex)
    final[:target_state.size, 0] = target_state.c

    guess = make_guess_field(basis, config) if guess is None else guess
    ensemble = _ClosedEnsemble(basis, initial, final, "P", 1)
    return _iterate(ensemble, guess, config, "prep", start_iteration, checkpoint, previous_objective)


def optimize_gate_dissipative(
    basis: EigenBasis,
    targets: TargetSet,
    config: OctConfig,
    model: DissipationModel,
    guess: Optional[ControlField] = None,
    start_iteration: int = 0,
    checkpoint: Optional[Checkpoint] = None,
    previous_objective: Optional[float] = None,
) -> Tuple[ControlField, OctTrace]:
    """
    Optimize the gate field under Lindblad dynamics

    F propagates the N^2 operators |j><k|; P propagates |j><j| and the
    superposition projector. The reported fidelity is
    (1/N^2) sum_jk <phi_j| Phi(|j><k|) |phi_k>, the trace fidelity of the
    realized channel. With kappa = 0 the iteration coincides with
    optimize_gate.
    """
    if model is None:
        raise ConfigurationError("Dissipative optimization needs a dissipation model")
    if targets.size > basis.size:
        raise ConfigurationError(f"Register size {targets.size} exceeds basis size {basis.size}")
    if config.functional == "P" and not targets.include_superposition:
        raise ConfigurationError("Functional P needs the superposition target")

    guess = make_guess_field(basis, config) if guess is None else guess
    ensemble = _OpenEnsemble(basis, targets, config.functional, model)
    return _iterate(
        ensemble, guess, config, f"gate/{config.functional}/kappa={model.kappa:.2e}",
        start_iteration, checkpoint, previous_objective,
    )


def filter_and_reoptimize(
    field: ControlField,
    band: Tuple[float, float],
    basis: EigenBasis,
    targets: TargetSet,
    config: OctConfig,
    model: Optional[DissipationModel] = None,
) -> Dict[str, object]:
    """
    Band-pass a converged field and optimize again from the filtered field

    Returns:
        Dict containing:
            - filtered_field: The band-passed field
            - filtered_fidelity: Fidelity of the filtered field before re-optimization
            - field: Re-optimized field
            - trace: Trace of the re-optimization (first record = filtered field)
    """
    filtered = bandpass_filter(field, band)
    if model is None:
        optimized, trace = optimize_gate(basis, targets, config, guess=filtered)
    else:
        optimized, trace = optimize_gate_dissipative(basis, targets, config, model, guess=filtered)

    filtered_fidelity = trace.records[0].fidelity
    logger.info(
        "Filtered field fidelity %.8f, re-optimized to %.8f",
        filtered_fidelity, trace.final_fidelity,
    )
    return {
        "filtered_field": filtered,
        "filtered_fidelity": filtered_fidelity,
        "field": optimized,
        "trace": trace,
    }
