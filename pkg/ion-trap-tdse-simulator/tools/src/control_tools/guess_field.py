"""
Guess Field Tool

Trial field for the optimizer: one sinusoid per allowed register transition
under a sin^2 envelope, every line with the same amplitude.
"""

import logging
from typing import Iterable, Optional

import numpy as np

from models.control import OctConfig
from models.dynamics import ControlField
from models.eigen_basis import EigenBasis
from tools.src.trap_tools.trap_model import transition_table

logger = logging.getLogger(__name__)

GUESS_DELTAS = (1, 3)


def envelope(times: np.ndarray, t_pulse: float) -> np.ndarray:
    """s(t) = sin^2(pi t / t_pulse), exactly zero at both ends"""
    shape = np.sin(np.pi * times / t_pulse) ** 2
    shape[0] = 0.0
    shape[-1] = 0.0
    return shape


def make_guess_field(
    basis: EigenBasis,
    config: OctConfig,
    deltas: Iterable[int] = GUESS_DELTAS,
    amplitude: Optional[float] = None,
) -> ControlField:
    """
    Build E(t) = sum_m A sin(omega_m t) s(t) over the register transitions

    Args:
        basis: Trap eigenbasis (at least N states)
        config: Optimizer configuration (t_pulse, dt, guess amplitude)
        deltas: Quantum-number changes of the included lines
        amplitude: Line amplitude A in a.u. (defaults to config.guess_amplitude)

    Returns:
        ControlField sampled at config.dt with E(0) = E(t_pulse) = 0
    """
    amplitude = config.guess_amplitude if amplitude is None else amplitude
    lines = transition_table(basis, deltas)
    times = np.arange(config.n_steps + 1) * config.dt

    carrier = np.zeros_like(times)
    for line in lines:
        carrier += np.sin(basis.angular_frequency(line.j, line.k) * times)

    logger.info("Guess field: %d lines, amplitude %.4e a.u., %d steps", len(lines), amplitude, config.n_steps)
    return ControlField(amplitude * carrier * envelope(times, config.t_pulse), config.dt)
