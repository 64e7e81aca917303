"""
Optimal Control Models

Optimizer configuration, target transitions and the per-iteration trace.
"""

from dataclasses import dataclass, field
from typing import Any, List, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from tools.src.units import parse_quantity

from .simulation import GateMatrix


class OctConfig(BaseModel):
    """Schema for the monotonic multi-target optimizer"""
    model_config = ConfigDict(frozen=True)

    t_pulse: float = Field(..., gt=0, description="Pulse duration, a.u.")
    dt: float = Field(..., gt=0, description="Propagation time step, a.u.")
    alpha0: float = Field(..., gt=0, description="Penalty strength alpha0, a.u.")
    functional: Literal["F", "P"] = Field("P", description="F: trace fidelity, P: summed transition probabilities")
    max_iterations: int = Field(500, ge=0, description="Maximum number of field updates")
    fidelity_goal: float = Field(0.99, gt=0, le=1, description="Stop once the gate fidelity reaches this value")
    include_superposition_target: bool = Field(True, description="Add the phase-fixing superposition target (P only)")
    guess_amplitude: float = Field(1.945e-13, ge=0, description="Amplitude of each guess-field line, a.u.")
    monotonic_tolerance: float = Field(1e-8, ge=0, description="Allowed objective decrease before aborting")
    stagnation_tolerance: float = Field(1e-12, ge=0, description="Relative improvement regarded as stagnation")
    stagnation_window: int = Field(20, gt=0, description="Consecutive stagnant iterations before stopping")
    log_every: int = Field(10, gt=0, description="Iteration logging period")
    checkpoint_every: int = Field(0, ge=0, description="Checkpoint period in iterations (0 disables)")

    @field_validator('t_pulse', 'dt', mode='before')
    @classmethod
    def parse_time(cls, v: Any) -> float:
        return parse_quantity(v, "time") if isinstance(v, str) else v

    @field_validator('guess_amplitude', mode='before')
    @classmethod
    def parse_field(cls, v: Any) -> float:
        return parse_quantity(v, "field") if isinstance(v, str) else v

    @field_validator('alpha0', mode='before')
    @classmethod
    def parse_alpha(cls, v: Any) -> float:
        return parse_quantity(v, "scalar")

    @model_validator(mode='after')
    def check_consistency(self) -> 'OctConfig':
        ratio = self.t_pulse / self.dt
        if abs(ratio - round(ratio)) > 1e-6 * ratio or round(ratio) < 1:
            raise ValueError(f"t_pulse must be an integer multiple of dt, got ratio {ratio}")
        if self.functional == "P" and not self.include_superposition_target:
            raise ValueError("Functional P needs the superposition target to fix relative phases")
        return self

    @property
    def n_steps(self) -> int:
        return int(round(self.t_pulse / self.dt))


@dataclass(frozen=True, eq=False)
class TargetSet:
    """Transitions |j> -> U_s|j>, j < N, plus the optional superposition pair"""
    gate: GateMatrix
    include_superposition: bool = True

    def __post_init__(self):
        if self.gate.unitarity_deviation() > 1e-8:
            raise ValueError("Target gate is not unitary")

    @property
    def size(self) -> int:
        return self.gate.size

    @property
    def n_targets(self) -> int:
        return self.size + (1 if self.include_superposition else 0)

    def initial_states(self, dimension: int) -> np.ndarray:
        """Columns |j> (and the normalized sum of them) padded to the dynamical size"""
        states = np.zeros((dimension, self.n_targets), dtype=complex)
        states[:self.size, :self.size] = np.eye(self.size)
        if self.include_superposition:
            states[:self.size, self.size] = 1.0 / np.sqrt(self.size)
        return states

    def final_states(self, dimension: int) -> np.ndarray:
        """Columns U_s|j> (and U_s applied to the superposition)"""
        states = np.zeros((dimension, self.n_targets), dtype=complex)
        states[:self.size, :self.size] = self.gate.entries
        if self.include_superposition:
            states[:self.size, self.size] = self.gate.entries.sum(axis=1) / np.sqrt(self.size)
        return states


class OctIterationRecord(BaseModel):
    """Schema for one optimizer iteration"""
    model_config = ConfigDict(frozen=True)

    iteration: int = Field(..., ge=0)
    objective: float = Field(..., description="Normalized terminal objective J")
    fidelity: float = Field(..., description="Gate fidelity |Tr(U_s^dagger U_P)|^2/N^2")
    fluence: float = Field(..., description="Integral of E(t)^2 dt, a.u.")


@dataclass
class OctTrace:
    """Per-iteration history of one optimization"""
    records: List[OctIterationRecord] = field(default_factory=list)
    converged: bool = False
    stop_reason: str = ""

    def append(self, record: OctIterationRecord) -> None:
        self.records.append(record)

    @property
    def objectives(self) -> np.ndarray:
        return np.array([r.objective for r in self.records])

    @property
    def fidelities(self) -> np.ndarray:
        return np.array([r.fidelity for r in self.records])

    @property
    def last(self) -> Optional[OctIterationRecord]:
        return self.records[-1] if self.records else None

    @property
    def final_fidelity(self) -> float:
        return self.records[-1].fidelity if self.records else 0.0
