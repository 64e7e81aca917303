"""
Qubit Encoding Tool

Maps the simulated grid wavefunction onto ion motional amplitudes and back.
Index j labels both grid point x_j and trap eigenstate chi_j:

    c_j = psi(x_j) sqrt(dx),    |psi(x_j)|^2 = |c_j|^2 / dx
"""

import numpy as np

from models.dynamics import QuantumState
from models.simulation import Grid, GridWavepacket, QubitAmplitudes

NORM_TOLERANCE = 1e-10


def encode(psi: GridWavepacket, tolerance: float = NORM_TOLERANCE) -> QubitAmplitudes:
    """
    Encode a normalized grid packet as qubit amplitudes

    Raises:
        ValueError: The packet is not normalized on its grid
    """
    norm = psi.norm()
    if abs(norm - 1.0) > tolerance:
        raise ValueError(f"Packet must be normalized on its grid, got norm {norm:.12f}")
    return QubitAmplitudes(c=psi.amplitudes * np.sqrt(psi.grid.delta_x), delta_x=psi.grid.delta_x)


def decode(amplitudes: QubitAmplitudes, tolerance: float = NORM_TOLERANCE) -> np.ndarray:
    """
    Localization probabilities |psi(x_j)|^2 = |c_j|^2 / dx

    Raises:
        ValueError: The amplitudes are not normalized
    """
    norm = amplitudes.norm()
    if abs(norm - 1.0) > tolerance:
        raise ValueError(f"Qubit amplitudes must be normalized, got norm {norm:.12f}")
    return amplitudes.populations() / amplitudes.delta_x


def packet_from_amplitudes(amplitudes: QubitAmplitudes, grid: Grid) -> GridWavepacket:
    """Inverse of encode: psi(x_j) = c_j / sqrt(dx)"""
    if amplitudes.size != grid.size:
        raise ValueError(f"{amplitudes.size} amplitudes do not fit a {grid.size}-point grid")
    return GridWavepacket(amplitudes.c / np.sqrt(grid.delta_x), grid)


def ion_state(amplitudes: QubitAmplitudes, dimension: int) -> QuantumState:
    """Ion state vector with the qubit amplitudes in its first N entries"""
    if amplitudes.size > dimension:
        raise ValueError(f"{amplitudes.size} qubit states do not fit a {dimension}-state basis")
    vector = np.zeros(dimension, dtype=complex)
    vector[:amplitudes.size] = amplitudes.c
    return QuantumState(vector)


def readout_probabilities(state: QuantumState, size: int, delta_x: float) -> np.ndarray:
    """
    Localization probabilities read from the first N populations of an ion state

    No normalization is required: population leaked outside the register
    (or lost to dissipation) simply reduces the total.
    """
    return state.populations()[:size] / delta_x
