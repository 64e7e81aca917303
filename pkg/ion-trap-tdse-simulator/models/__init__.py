"""
Models Package

Contains all data models for the trapped-ion simulation toolkit
"""

from .trap_params import TrapParams
from .eigen_basis import EigenBasis, TransitionLine
from .simulation import GateMatrix, Grid, GridWavepacket, QubitAmplitudes, SimSystem
from .dynamics import ControlField, DissipationModel, QuantumState, Trajectory

from .control import OctConfig, OctIterationRecord, OctTrace, TargetSet
from .spectrum import Spectrum
from .run_config import RunConfig

__all__ = [
    'TrapParams',
    'EigenBasis',
    'TransitionLine',
    'SimSystem',
    'Grid',
    'GridWavepacket',
    'GateMatrix',
    'QubitAmplitudes',
    'ControlField',
    'QuantumState',
    'Trajectory',
    'DissipationModel',
    'OctConfig',
    'TargetSet',
    'OctIterationRecord',
    'OctTrace',
    'Spectrum',
    'RunConfig',
]
