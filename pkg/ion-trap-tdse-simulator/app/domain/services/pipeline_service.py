"""
Pipeline Service

Builds the domain objects shared by the CLI stages from a validated run
configuration: trap basis, simulated system, grid, target gate, initial
packets and the kappa list.
"""

from typing import List, Optional, Sequence

from models.control import OctConfig
from models.eigen_basis import EigenBasis
from models.run_config import PacketSpec, RunConfig
from models.simulation import GateMatrix, Grid, GridWavepacket, SimSystem
from tools.src.exceptions import ConfigurationError
from tools.src.simulation_tools.grid_simulation import elementary_gate, gaussian_packet, make_grid
from tools.src.trap_tools.trap_model import solve_trap


def build_basis(run_config: RunConfig) -> EigenBasis:
    return solve_trap(run_config.trap)


def build_system(run_config: RunConfig) -> SimSystem:
    return SimSystem.harmonic(run_config.simulation.mass, run_config.simulation.omega)


def build_grid(run_config: RunConfig) -> Grid:
    simulation = run_config.simulation
    return make_grid(simulation.x_min, simulation.x_max, simulation.grid_points)


def build_target_gate(run_config: RunConfig) -> GateMatrix:
    """Elementary gate U_s(Delta t) of the simulated system on the run grid"""
    simulation = run_config.simulation
    return elementary_gate(build_system(run_config), build_grid(run_config), simulation.delta_t, simulation.substeps)


def build_packet(spec: PacketSpec, grid: Grid) -> GridWavepacket:
    return gaussian_packet(grid, spec.sigma, spec.x0)


def control_config(run_config: RunConfig, functional: Optional[str] = None) -> OctConfig:
    """Optimizer configuration with an optional functional override"""
    if functional is None or functional == run_config.control.functional:
        return run_config.control
    data = run_config.control.model_dump()
    data["functional"] = functional
    data["include_superposition_target"] = True
    return OctConfig.model_validate(data)


def resolve_kappas(run_config: RunConfig, override: Optional[Sequence[float]] = None, required: bool = False) -> List[float]:
    """
    kappa values from the command line or the configuration

    Raises:
        ConfigurationError: No kappa is available but one is required, or a value is negative
    """
    kappas = list(override) if override else list(run_config.dissipation.kappa)
    if any(kappa < 0 for kappa in kappas):
        raise ConfigurationError("kappa values must be non-negative")
    if required and not kappas:
        raise ConfigurationError("Dissipative runs need at least one kappa (config [dissipation] kappa or --kappa)")
    return kappas


def kappa_label(kappa: float) -> str:
    """File-name tag of a kappa value, e.g. kappa5e-18"""
    return f"kappa{kappa:.3g}"


def packet_label(index: int) -> str:
    return f"packet{index}"
