"""
Grid Simulation Tool

The simulated one-particle system on a uniform grid: grid construction,
Gaussian packets, the Strang split-operator step, assembly of the elementary
evolution operator U_s(Delta t) = U_s(delta t)^K and exact harmonic
reference evolutions.
"""

import logging
from typing import List, Tuple

import numpy as np
from scipy import fft, special

from models.simulation import GateMatrix, Grid, GridWavepacket, SimSystem
from tools.src.exceptions import NumericalError

logger = logging.getLogger(__name__)

UNITARITY_LIMIT = 1e-8
LEAK_THRESHOLD = 1e-6


def make_grid(x_min: float, x_max: float, n_points: int) -> Grid:
    """
    Build the grid x_j = x_min + (j+1) dx, dx = (x_max - x_min)/N

    The last point equals x_max exactly and x_min itself is excluded.
    Non-power-of-two sizes are allowed but logged.
    """
    if not x_min < x_max:
        raise ValueError(f"Grid needs x_min < x_max, got {x_min} >= {x_max}")
    if n_points < 2:
        raise ValueError("Grid needs at least two points")

    delta_x = (x_max - x_min) / n_points
    points = x_min + (np.arange(n_points) + 1) * delta_x
    points[-1] = x_max

    if n_points & (n_points - 1):
        logger.warning("Grid size %d is not a power of two", n_points)
    return Grid(x_min=float(x_min), x_max=float(x_max), points=points)


def gaussian_packet(grid: Grid, sigma: float, x0: float) -> GridWavepacket:
    """
    Sample (1/pi sigma)^(1/4) exp(-(x-x0)^2/2 sigma) and renormalize on the grid

    sigma is the width parameter (hbar/m omega for a coherent state); the
    position variance is sigma/2.
    """
    if sigma <= 0:
        raise ValueError("sigma must be positive")

    amplitudes = (np.pi * sigma) ** -0.25 * np.exp(-(grid.points - x0) ** 2 / (2.0 * sigma))
    packet = GridWavepacket(amplitudes.astype(complex), grid).normalized()

    edge = np.abs(packet.amplitudes[[0, -1]]) ** 2 * grid.delta_x
    if np.max(edge) > LEAK_THRESHOLD:
        logger.warning(
            "Gaussian packet (sigma=%g, x0=%g) leaks off the grid: edge weight %.2e",
            sigma, x0, np.max(edge),
        )
    return packet


def harmonic_eigenfunction(grid: Grid, n: int, mass: float = 1.0, omega: float = 1.0) -> GridWavepacket:
    """n-th harmonic-oscillator eigenfunction sampled and renormalized on the grid"""
    scale = np.sqrt(mass * omega)
    xi = scale * grid.points
    values = special.eval_hermite(n, xi) * np.exp(-0.5 * xi ** 2)
    return GridWavepacket(values.astype(complex), grid).normalized()


def momentum_grid(grid: Grid) -> np.ndarray:
    """Angular wave numbers in the standard DFT layout (0..N/2-1, then negative)"""
    return 2.0 * np.pi * fft.fftfreq(grid.size, d=grid.delta_x)


def _split_operator_factors(system: SimSystem, grid: Grid, time_step: float) -> Tuple[np.ndarray, np.ndarray]:
    potential = system.potential_on(grid)
    half_potential = np.exp(-0.5j * potential * time_step)
    kinetic = np.exp(-0.5j * momentum_grid(grid) ** 2 * time_step / system.mass)
    return half_potential, kinetic


def _apply_steps(values: np.ndarray, half_potential: np.ndarray, kinetic: np.ndarray, steps: int) -> np.ndarray:
    """Apply the Strang step `steps` times along axis 0 (vector or column stack)"""
    if values.ndim == 2:
        half_potential = half_potential[:, None]
        kinetic = kinetic[:, None]
    for _ in range(steps):
        values = half_potential * values
        values = fft.ifft(kinetic * fft.fft(values, axis=0), axis=0)
        values = half_potential * values
    return values


def split_step(psi: GridWavepacket, system: SimSystem, time_step: float) -> GridWavepacket:
    """
    One Strang step exp(-iV dt/2) F^-1 exp(-i k^2 dt/2m) F exp(-iV dt/2)

    Args:
        psi: Packet on its grid
        system: Simulated system (mass, potential)
        time_step: delta t >= 0, a.u.

    Returns:
        Propagated packet; the norm is preserved to machine precision
    """
    if time_step < 0:
        raise ValueError("Split-operator time step must be non-negative")
    half_potential, kinetic = _split_operator_factors(system, psi.grid, time_step)
    return GridWavepacket(_apply_steps(psi.amplitudes, half_potential, kinetic, 1), psi.grid)


def elementary_gate(system: SimSystem, grid: Grid, delta_t: float, substeps: int) -> GateMatrix:
    """
    Assemble U_s(Delta t) = U_s(delta t)^K column by column

    Column j is the image of the delta packet at x_j (amplitude 1/sqrt(dx)),
    read back in the c_j = psi(x_j) sqrt(dx) convention.

    Raises:
        ValueError: K < 1 or negative Delta t
        NumericalError: The assembled matrix deviates from unitarity by more than 1e-8
    """
    if substeps < 1:
        raise ValueError("K must be at least 1")
    if delta_t < 0:
        raise ValueError("Delta t must be non-negative")

    time_step = delta_t / substeps
    half_potential, kinetic = _split_operator_factors(system, grid, time_step)

    scale = np.sqrt(grid.delta_x)
    columns = np.eye(grid.size, dtype=complex) / scale
    entries = _apply_steps(columns, half_potential, kinetic, substeps) * scale

    gate = GateMatrix(entries=entries, delta_t=delta_t, steps=substeps, time_step=time_step, label=system.label)
    deviation = gate.unitarity_deviation()
    if deviation > UNITARITY_LIMIT:
        raise NumericalError(f"Elementary gate is not unitary: max |U^dagger U - I| = {deviation:.3e}")

    logger.info(
        "Elementary gate built: N=%d Delta t=%.6g K=%d unitarity deviation %.2e",
        grid.size, delta_t, substeps, deviation,
    )
    return gate


def classic_propagate(psi0: GridWavepacket, gate: GateMatrix, n_pulses: int) -> List[GridWavepacket]:
    """Apply the gate n_pulses times; returns [psi0, psi1, ..., psi_Np]"""
    if gate.size != psi0.grid.size:
        raise ValueError(f"Gate size {gate.size} does not match grid size {psi0.grid.size}")
    if n_pulses < 0:
        raise ValueError("Number of pulses must be non-negative")

    packets = [psi0]
    amplitudes = psi0.amplitudes
    for _ in range(n_pulses):
        amplitudes = gate.entries @ amplitudes
        packets.append(GridWavepacket(amplitudes, psi0.grid))
    return packets


def coherent_state_moments(system: SimSystem, sigma: float, x0: float, t: float) -> Tuple[float, float]:
    """
    Centre and width parameter of a Gaussian evolving in a harmonic potential

    The width parameter follows sigma_t = 2 s(t)^2 with
    s(t)^2 = s0^2 cos^2(wt) + (1/2mw)^2/s0^2 sin^2(wt), s0^2 = sigma/2.
    """
    if not system.is_harmonic:
        raise ValueError(f"Analytic evolution needs a harmonic system, got '{system.label}'")
    if sigma <= 0:
        raise ValueError("sigma must be positive")

    phase = system.omega * t
    variance0 = sigma / 2.0
    momentum_term = (1.0 / (2.0 * system.mass * system.omega)) ** 2 / variance0
    variance = variance0 * np.cos(phase) ** 2 + momentum_term * np.sin(phase) ** 2
    return float(x0 * np.cos(phase)), float(2.0 * variance)


def analytic_coherent_evolution(
    system: SimSystem,
    grid: Grid,
    sigma: float,
    x0: float,
    t: float,
) -> GridWavepacket:
    """
    Exact |psi(x,t)|^2 of a Gaussian packet in the harmonic potential

    Returns a packet whose amplitudes are the square root of the exact
    density sampled on the grid and renormalized (the phase is dropped).
    """
    centre, width = coherent_state_moments(system, sigma, x0, t)
    density = np.exp(-(grid.points - centre) ** 2 / width)
    return GridWavepacket(np.sqrt(density).astype(complex), grid).normalized()


def exact_probability_snapshots(
    system: SimSystem,
    grid: Grid,
    sigma: float,
    x0: float,
    delta_t: float,
    n_pulses: int,
) -> np.ndarray:
    """Exact densities at t = l Delta t, l = 0..n_pulses, shape (n_pulses+1, N)"""
    return np.array([
        analytic_coherent_evolution(system, grid, sigma, x0, l * delta_t).probabilities()
        for l in range(n_pulses + 1)
    ])
