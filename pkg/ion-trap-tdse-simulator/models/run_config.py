"""
Run Configuration Model

Schema for the declarative TOML run file read by the CLI. Physical
quantities carry unit suffixes and are converted to atomic units here.
"""

import copy
import hashlib
import math
import tomllib
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from tools.src.exceptions import ConfigurationError
from tools.src.units import parse_quantity

from .control import OctConfig
from .trap_params import TrapParams

Tier = Literal["desk", "paper"]

TIER_PRESETS: Dict[str, Dict[str, Dict[str, Any]]] = {
    "desk": {
        "trap": {"primitive_size": 50, "dynamical_size": 8, "computational_size": 4},
        "simulation": {"x_min": -4.0, "x_max": 4.0, "grid_points": 4},
        "control": {
            "t_pulse": "20 us",
            "dt": "1 ns",
            "alpha0": 1e15,
            "max_iterations": 500,
            "fidelity_goal": 0.99,
        },
    },
    "paper": {
        "trap": {"primitive_size": 50, "dynamical_size": 32, "computational_size": 16},
        "simulation": {"x_min": -4.0, "x_max": 4.0, "grid_points": 16},
        "control": {
            "t_pulse": "96 us",
            "dt": "960 ps",
            "alpha0": 1e15,
            "max_iterations": 1500,
            "fidelity_goal": 0.99999,
        },
    },
}


class SimulationSection(BaseModel):
    """Schema for the simulated harmonic system, its grid and the pulse sequence"""
    model_config = ConfigDict(frozen=True)

    mass: float = Field(1.0, gt=0, description="Simulated particle mass m_s, a.u.")
    omega: float = Field(1.0, gt=0, description="Harmonic frequency of V(x) = m_s omega^2 x^2/2, a.u.")
    x_min: float = Field(-4.0, description="Left grid edge (excluded), a.u.")
    x_max: float = Field(4.0, description="Right grid edge (last point), a.u.")
    grid_points: int = Field(16, ge=2, description="Number of grid points; must equal N")
    delta_t: float = Field(2.0 * math.pi / 10.0, ge=0, description="Gate time step Delta t, a.u.")
    substeps: int = Field(10, ge=1, description="Split-operator steps K per gate")
    n_pulses: int = Field(10, ge=0, description="Number of gate pulses N_p")
    gate_field: Optional[str] = Field(None, description="CSV file of the gate field")
    prep_field: Optional[str] = Field(None, description="CSV file of the preparation field")

    @field_validator('mass', 'omega', 'x_min', 'x_max', 'delta_t', mode='before')
    @classmethod
    def parse_scalar(cls, v: Any) -> float:
        return parse_quantity(v, "scalar")

    @model_validator(mode='after')
    def check_grid(self) -> 'SimulationSection':
        if not self.x_min < self.x_max:
            raise ValueError(f"x_min must be below x_max, got {self.x_min} >= {self.x_max}")
        return self


class DissipationSection(BaseModel):
    """Schema for the heating model and the kappa sweep"""
    model_config = ConfigDict(frozen=True)

    kappa: List[float] = Field(default_factory=list, description="Rate scales kappa, a.u.")
    deltas: List[int] = Field(default_factory=lambda: [1, 3], description="|j-k| of the coupled pairs")
    all_dipole_pairs: bool = Field(False, description="Couple every pair with a nonzero dipole")

    @field_validator('kappa', mode='before')
    @classmethod
    def parse_kappa(cls, v: Any) -> List[float]:
        values = v if isinstance(v, (list, tuple)) else [v]
        parsed = [parse_quantity(value, "scalar") for value in values]
        if any(value < 0 for value in parsed):
            raise ValueError("kappa values must be non-negative")
        return parsed


class PacketSpec(BaseModel):
    """Schema for an initial Gaussian packet"""
    model_config = ConfigDict(frozen=True)

    sigma: float = Field(1.0, gt=0, description="Width parameter hbar/m_s omega, a.u.")
    x0: float = Field(-0.75, description="Initial centre, a.u.")


class AnalysisSection(BaseModel):
    """Schema for post-processing options"""
    model_config = ConfigDict(frozen=True)

    filter_band: Optional[Tuple[float, float]] = Field(None, description="Band-pass window (Hz); default from the trap lines")
    peak_threshold: float = Field(0.01, gt=0, lt=1, description="Relative height of spectral lines")

    @field_validator('filter_band', mode='before')
    @classmethod
    def parse_band(cls, v: Any) -> Optional[Tuple[float, float]]:
        if v is None:
            return None
        if len(v) != 2:
            raise ValueError("filter_band needs exactly two frequencies")
        return tuple(parse_quantity(value, "frequency") for value in v)


class RunConfig(BaseModel):
    """Schema for a complete simulator run"""
    model_config = ConfigDict(frozen=True)

    tier: Tier = Field("desk", description="Scale tier: desk or paper")
    acknowledge_long_running: bool = Field(False, description="Required for the paper tier")
    output_dir: Optional[str] = Field(None, description="Directory receiving all artifacts")
    trap: TrapParams = Field(default_factory=TrapParams)
    simulation: SimulationSection = Field(default_factory=SimulationSection)
    control: OctConfig
    dissipation: DissipationSection = Field(default_factory=DissipationSection)
    packets: List[PacketSpec] = Field(default_factory=lambda: [PacketSpec()])
    analysis: AnalysisSection = Field(default_factory=AnalysisSection)

    @model_validator(mode='after')
    def check_run(self) -> 'RunConfig':
        if self.simulation.grid_points != self.trap.computational_size:
            raise ValueError(
                f"Grid has {self.simulation.grid_points} points but the register has "
                f"N={self.trap.computational_size} states"
            )
        if self.tier == "paper" and not self.acknowledge_long_running:
            raise ValueError(
                "The paper tier runs for many hours; set acknowledge_long_running or pass --long-running"
            )
        return self

    def config_hash(self) -> str:
        """sha256 of the canonical JSON form of the validated configuration (output directory excluded)"""
        canonical = self.model_dump_json(exclude={"output_dir"})
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()

    @classmethod
    def from_dict(
        cls,
        data: Dict[str, Any],
        tier: Optional[str] = None,
        acknowledge_long_running: bool = False,
        output_dir: Optional[str] = None,
    ) -> 'RunConfig':
        """
        Validate a configuration mapping on top of its tier preset

        Args:
            data: Parsed configuration sections
            tier: Overrides the tier named in the data
            acknowledge_long_running: Sets the long-running acknowledgment
            output_dir: Overrides the output directory

        Raises:
            ConfigurationError: Unknown tier or any validation failure
        """
        tier = tier or data.get("tier", "desk")
        if tier not in TIER_PRESETS:
            raise ConfigurationError(f"Unknown tier '{tier}', expected one of {sorted(TIER_PRESETS)}")

        merged = _merge(TIER_PRESETS[tier], data)
        merged["tier"] = tier
        if acknowledge_long_running:
            merged["acknowledge_long_running"] = True
        if output_dir is not None:
            merged["output_dir"] = str(output_dir)

        try:
            return cls.model_validate(merged)
        except ValidationError as exc:
            raise ConfigurationError(f"Invalid run configuration: {exc}") from exc

    @classmethod
    def from_toml(
        cls,
        path,
        tier: Optional[str] = None,
        acknowledge_long_running: bool = False,
        output_dir: Optional[str] = None,
    ) -> 'RunConfig':
        """
        Load and validate a TOML run file

        Field-file paths in [simulation] are resolved relative to the file
        and must exist.

        Raises:
            ConfigurationError: Missing file, TOML syntax error, missing
                referenced file or validation failure
        """
        path = Path(path)
        if not path.is_file():
            raise ConfigurationError(f"Configuration file not found: {path}")
        try:
            with path.open("rb") as handle:
                data = tomllib.load(handle)
        except tomllib.TOMLDecodeError as exc:
            raise ConfigurationError(f"Could not parse {path}: {exc}") from exc

        simulation = data.get("simulation", {})
        for key in ("gate_field", "prep_field"):
            if simulation.get(key):
                referenced = (path.parent / simulation[key]).resolve()
                if not referenced.is_file():
                    raise ConfigurationError(f"{key} file not found: {referenced}")
                simulation[key] = str(referenced)

        return cls.from_dict(data, tier, acknowledge_long_running, output_dir)


def _merge(base: Dict[str, Any], update: Dict[str, Any]) -> Dict[str, Any]:
    """Recursive dict merge; values in `update` win"""
    merged = copy.deepcopy(base)
    for key, value in update.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = copy.deepcopy(value)
    return merged
