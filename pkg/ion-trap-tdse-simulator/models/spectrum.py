"""
Spectrum Model

Schema for the power spectrum of a control field
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class Spectrum:
    """One-sided power spectrum |S(nu)|^2 normalized to peak 1"""
    frequencies: np.ndarray
    power: np.ndarray
    peak_frequencies: np.ndarray
    fluence: float
    parseval_error: float

    @property
    def resolution(self) -> float:
        """Frequency bin width in Hz"""
        return float(self.frequencies[1] - self.frequencies[0])
