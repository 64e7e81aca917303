"""
Dynamics Models

Control field samples, ion states in the interaction picture, propagation
trajectories and the phenomenological heating model.
"""

from dataclasses import dataclass
from typing import Callable, Tuple

import numpy as np
from scipy.integrate import trapezoid

from tools.src.units import AU_TIME_S, field_to_vpm


@dataclass(frozen=True, eq=False)
class ControlField:
    """Real field E(t_i) on a uniform grid t_i = i*dt, i = 0..n_steps"""
    samples: np.ndarray
    dt: float

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=float)
        if samples.ndim != 1 or samples.shape[0] < 2:
            raise ValueError("A control field needs at least two samples")
        if self.dt <= 0:
            raise ValueError("Field sample spacing must be positive")
        if not np.all(np.isfinite(samples)):
            raise ValueError("Control field contains non-finite samples")
        object.__setattr__(self, 'samples', samples)

    @classmethod
    def from_function(cls, function: Callable[[np.ndarray], np.ndarray], t_pulse: float, n_steps: int) -> 'ControlField':
        times = np.arange(n_steps + 1) * (t_pulse / n_steps)
        return cls(np.asarray(function(times), dtype=float), t_pulse / n_steps)

    @classmethod
    def zeros(cls, t_pulse: float, n_steps: int) -> 'ControlField':
        return cls(np.zeros(n_steps + 1), t_pulse / n_steps)

    @property
    def n_steps(self) -> int:
        return int(self.samples.shape[0] - 1)

    @property
    def t_pulse(self) -> float:
        return self.n_steps * self.dt

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.samples.shape[0]) * self.dt

    def fluence(self) -> float:
        """Time-integrated squared field, a.u."""
        return float(trapezoid(self.samples ** 2, dx=self.dt))

    def peak_vpm(self) -> float:
        return field_to_vpm(float(np.max(np.abs(self.samples))))

    def midpoints(self) -> np.ndarray:
        """Linearly interpolated values at t_i + dt/2"""
        return 0.5 * (self.samples[:-1] + self.samples[1:])

    def refined(self) -> 'ControlField':
        """Same piecewise-linear field sampled at half the spacing"""
        fine = np.empty(2 * self.n_steps + 1)
        fine[0::2] = self.samples
        fine[1::2] = self.midpoints()
        return ControlField(fine, self.dt / 2)


@dataclass(frozen=True, eq=False)
class QuantumState:
    """Ion state in the eigenbasis: amplitude vector (D,) or density matrix (D, D)"""
    data: np.ndarray
    picture: str = "interaction"

    def __post_init__(self):
        data = np.asarray(self.data, dtype=complex)
        if data.ndim not in (1, 2):
            raise ValueError("A quantum state is a vector or a square matrix")
        if data.ndim == 2 and data.shape[0] != data.shape[1]:
            raise ValueError("A density matrix must be square")
        object.__setattr__(self, 'data', data)

    @classmethod
    def basis_state(cls, index: int, size: int, density: bool = False) -> 'QuantumState':
        vector = np.zeros(size, dtype=complex)
        vector[index] = 1.0
        return cls(np.outer(vector, vector.conj()) if density else vector)

    @property
    def is_density(self) -> bool:
        return self.data.ndim == 2

    @property
    def size(self) -> int:
        return int(self.data.shape[0])

    def as_density(self) -> 'QuantumState':
        if self.is_density:
            return self
        return QuantumState(np.outer(self.data, self.data.conj()), self.picture)

    def populations(self) -> np.ndarray:
        if self.is_density:
            return np.real(np.diag(self.data)).copy()
        return np.abs(self.data) ** 2

    def norm(self) -> float:
        """Vector norm squared, or the trace of a density matrix"""
        return float(np.sum(self.populations()))

    def hermiticity_deviation(self) -> float:
        if not self.is_density:
            return 0.0
        return float(np.max(np.abs(self.data - self.data.conj().T)))

    def min_eigenvalue(self) -> float:
        if not self.is_density:
            return 0.0
        hermitian = 0.5 * (self.data + self.data.conj().T)
        return float(np.linalg.eigvalsh(hermitian)[0])


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Recorded states along one propagation"""
    times: np.ndarray
    states: np.ndarray

    def __len__(self) -> int:
        return int(self.times.shape[0])

    def __getitem__(self, index: int) -> QuantumState:
        return QuantumState(self.states[index])

    @property
    def final(self) -> QuantumState:
        return QuantumState(self.states[-1])

    def populations(self) -> np.ndarray:
        if self.states.ndim == 3:
            return np.real(np.diagonal(self.states, axis1=1, axis2=2))
        return np.abs(self.states) ** 2


@dataclass(frozen=True, eq=False)
class DissipationModel:
    """Heating model with transition operators L_jk = sqrt(gamma_jk)|j><k|"""
    kappa: float
    pairs: Tuple[Tuple[int, int], ...]
    rates: np.ndarray
    mean_rate: float

    @property
    def mean_heating_time(self) -> float:
        """1/mean rate in a.u. of time; infinite without dissipation"""
        if self.mean_rate <= 0:
            return float('inf')
        return 1.0 / self.mean_rate

    @property
    def mean_heating_time_s(self) -> float:
        return self.mean_heating_time * AU_TIME_S

    @property
    def loss_rates(self) -> np.ndarray:
        """Gamma_k = sum_j gamma_jk, total rate out of state k"""
        return self.rates.sum(axis=0)

    @property
    def is_closed(self) -> bool:
        return not np.any(self.rates)
