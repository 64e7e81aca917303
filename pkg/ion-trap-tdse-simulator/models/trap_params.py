"""
Trap Parameters Model

Schema for the axial ion-trap model (atomic units)
"""

from typing import Any

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from tools.src.units import CADMIUM_111_MASS_AU, parse_quantity


class TrapParams(BaseModel):
    """Schema for the anharmonic trap H0 = p^2/2m + q(k z^2/2 + k' z^4/24)"""
    model_config = ConfigDict(frozen=True)

    mass: float = Field(CADMIUM_111_MASS_AU, gt=0, description="Ion mass, a.u.")
    charge: float = Field(1.0, description="Ion charge, a.u.")
    k: float = Field(3.5828e-14, gt=0, description="Quadratic force constant, a.u.")
    k_quart: float = Field(3.5828e-18, ge=0, description="Quartic force constant k', a.u.")
    primitive_size: int = Field(50, gt=0, description="Harmonic-oscillator primitive basis size M")
    dynamical_size: int = Field(32, gt=0, description="Number of eigenstates kept for dynamics D")
    computational_size: int = Field(16, gt=0, description="Number of qubit states N")

    @field_validator('mass', 'charge', 'k', 'k_quart', mode='before')
    @classmethod
    def parse_atomic_units(cls, v: Any) -> float:
        return parse_quantity(v, "scalar")

    @model_validator(mode='after')
    def check_sizes(self) -> 'TrapParams':
        if not (self.computational_size <= self.dynamical_size <= self.primitive_size):
            raise ValueError(
                "Basis sizes must satisfy 0 < N <= D <= M, got "
                f"N={self.computational_size}, D={self.dynamical_size}, M={self.primitive_size}"
            )
        if self.charge * self.k <= 0:
            raise ValueError("q*k must be positive for a confining trap")
        return self
