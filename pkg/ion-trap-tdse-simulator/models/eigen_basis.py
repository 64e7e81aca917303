"""
Eigen Basis Model

Diagonalized trap: eigenenergies, eigenvectors in the harmonic primitive
basis, position and dipole matrices. Also the transition-line record
returned by transition_table.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from .trap_params import TrapParams


@dataclass(frozen=True, eq=False)
class EigenBasis:
    """Lowest D eigenpairs of the trap Hamiltonian"""
    energies: np.ndarray
    vectors: np.ndarray
    z_matrix: np.ndarray
    dipole: np.ndarray
    omega: float
    computational_size: int
    charge: float = 1.0
    params: Optional[TrapParams] = None

    @property
    def size(self) -> int:
        """Dynamical basis size D"""
        return int(self.energies.shape[0])

    def angular_frequency(self, j: int, k: int) -> float:
        """Transition angular frequency E_k - E_j (hbar = 1)"""
        return float(self.energies[k] - self.energies[j])

    @classmethod
    def from_levels(
        cls,
        energies,
        dipole,
        computational_size: int,
        charge: float = 1.0,
    ) -> 'EigenBasis':
        """
        Build a basis directly from level energies and a dipole matrix

        Used for model systems (two- and three-level tests) that are not
        derived from a trap potential.
        """
        energies = np.asarray(energies, dtype=float)
        dipole = np.asarray(dipole, dtype=float)
        size = energies.shape[0]
        if dipole.shape != (size, size):
            raise ValueError(f"Dipole matrix must be {size}x{size}, got {dipole.shape}")
        if not 0 < computational_size <= size:
            raise ValueError("computational_size must lie in 1..D")
        gaps = np.diff(energies)
        return cls(
            energies=energies,
            vectors=np.eye(size),
            z_matrix=dipole / charge,
            dipole=dipole,
            omega=float(gaps[0]) if size > 1 else 0.0,
            computational_size=computational_size,
            charge=charge,
        )


class TransitionLine(BaseModel):
    """Schema for one allowed transition j -> k of the qubit register"""
    model_config = ConfigDict(frozen=True)

    j: int = Field(..., ge=0, description="Lower state index")
    k: int = Field(..., ge=0, description="Upper state index")
    frequency_hz: float = Field(..., description="(E_k - E_j)/h in Hz")
    dipole_au: float = Field(..., description="Dipole matrix element mu_jk, a.u.")

    @property
    def delta(self) -> int:
        return self.k - self.j
