"""
Simulation Models

Value types of the simulated one-particle system: the system itself, the
spatial grid, wave packets on the grid, gate matrices and qubit amplitudes.
"""

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

Potential = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True, eq=False)
class SimSystem:
    """Simulated particle: H_s = p^2/2m_s + V(x)"""
    mass: float = 1.0
    potential: Potential = field(default=lambda x: 0.5 * x ** 2)
    label: str = "harmonic"
    # set only for harmonic potentials; enables the analytic reference evolution
    omega: Optional[float] = 1.0

    @classmethod
    def harmonic(cls, mass: float = 1.0, omega: float = 1.0) -> 'SimSystem':
        if mass <= 0 or omega <= 0:
            raise ValueError("Harmonic system needs positive mass and omega")
        return cls(
            mass=mass,
            potential=lambda x: 0.5 * mass * omega ** 2 * x ** 2,
            label="harmonic",
            omega=omega,
        )

    @classmethod
    def from_callable(cls, potential: Potential, mass: float = 1.0, label: str = "custom") -> 'SimSystem':
        if mass <= 0:
            raise ValueError("Mass must be positive")
        return cls(mass=mass, potential=potential, label=label, omega=None)

    @property
    def is_harmonic(self) -> bool:
        return self.omega is not None

    def potential_on(self, grid: 'Grid') -> np.ndarray:
        values = np.asarray(self.potential(grid.points), dtype=float)
        if values.shape != grid.points.shape:
            values = np.broadcast_to(values, grid.points.shape).astype(float)
        if not np.all(np.isfinite(values)):
            raise ValueError(f"Potential '{self.label}' is not finite on the grid")
        return values


@dataclass(frozen=True, eq=False)
class Grid:
    """Uniform grid x_j = x_min + (j+1) dx, j = 0..N-1 (x_min excluded)"""
    x_min: float
    x_max: float
    points: np.ndarray

    @property
    def size(self) -> int:
        return int(self.points.shape[0])

    @property
    def delta_x(self) -> float:
        return (self.x_max - self.x_min) / self.size


@dataclass(frozen=True, eq=False)
class GridWavepacket:
    """Complex amplitudes psi(x_j) on a grid"""
    amplitudes: np.ndarray
    grid: Grid

    def norm(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2) * self.grid.delta_x)

    def probabilities(self) -> np.ndarray:
        """Localization probability density |psi(x_j)|^2"""
        return np.abs(self.amplitudes) ** 2

    def normalized(self) -> 'GridWavepacket':
        return GridWavepacket(self.amplitudes / np.sqrt(self.norm()), self.grid)


@dataclass(frozen=True, eq=False)
class GateMatrix:
    """N x N evolution operator with its provenance"""
    entries: np.ndarray
    delta_t: float
    steps: int = 1
    time_step: float = 0.0
    label: str = ""

    @property
    def size(self) -> int:
        return int(self.entries.shape[0])

    def unitarity_deviation(self) -> float:
        """max |U^dagger U - I|"""
        product = self.entries.conj().T @ self.entries
        return float(np.max(np.abs(product - np.eye(self.size))))

    def power(self, exponent: int) -> np.ndarray:
        return np.linalg.matrix_power(self.entries, exponent)


@dataclass(frozen=True, eq=False)
class QubitAmplitudes:
    """Ion amplitudes c_j over the first N eigenstates; c_j = psi(x_j) sqrt(dx)"""
    c: np.ndarray
    delta_x: float

    @property
    def size(self) -> int:
        return int(self.c.shape[0])

    def populations(self) -> np.ndarray:
        return np.abs(self.c) ** 2

    def norm(self) -> float:
        return float(np.sum(self.populations()))
