"""
Unit Conversion Tool

Atomic units are used everywhere inside the simulator. This module holds the
CODATA conversion factors and parses the unit-suffixed quantities accepted by
run configuration files.
"""

import math
import re
from typing import Union

from scipy.constants import physical_constants

AU_TIME_S = physical_constants["atomic unit of time"][0]
AU_FIELD_VPM = physical_constants["atomic unit of electric field"][0]
AU_LENGTH_M = physical_constants["atomic unit of length"][0]
PROTON_MASS_UNIT_AU = 1822.888486

# 111Cd+ ion mass in electron masses
CADMIUM_111_MASS_AU = 111 * PROTON_MASS_UNIT_AU

_UNIT_SCALES = {
    "time": {
        "au": 1.0,
        "s": 1.0 / AU_TIME_S,
        "ms": 1e-3 / AU_TIME_S,
        "us": 1e-6 / AU_TIME_S,
        "μs": 1e-6 / AU_TIME_S,
        "ns": 1e-9 / AU_TIME_S,
        "ps": 1e-12 / AU_TIME_S,
    },
    # frequencies stay in Hz, the unit used by spectra and filter bands
    "frequency": {
        "Hz": 1.0,
        "kHz": 1e3,
        "MHz": 1e6,
    },
    "field": {
        "au": 1.0,
        "Vpm": 1.0 / AU_FIELD_VPM,
    },
    "scalar": {
        "au": 1.0,
    },
}

_QUANTITY_PATTERN = re.compile(
    r"^\s*([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)\s*([A-Za-zμ]+)?\s*$"
)


def parse_quantity(value: Union[str, int, float], dimension: str) -> float:
    """
    Parse a unit-suffixed quantity into internal units

    Args:
        value: Text such as "96 us", "0.1 Vpm", "2.5 MHz", or a bare number
            for dimension "scalar" (atomic units implied)
        dimension: One of "time", "frequency", "field", "scalar"

    Returns:
        Value in atomic units (Hz for dimension "frequency")

    Raises:
        ValueError: Unknown dimension, missing or unknown unit suffix
    """
    if dimension not in _UNIT_SCALES:
        raise ValueError(f"Unknown dimension '{dimension}'")
    scales = _UNIT_SCALES[dimension]

    if isinstance(value, bool):
        raise ValueError(f"Expected a {dimension} quantity, got a boolean")

    if isinstance(value, (int, float)):
        if dimension == "scalar":
            return float(value)
        raise ValueError(
            f"{dimension} quantity {value!r} needs a unit suffix, one of {sorted(scales)}"
        )

    match = _QUANTITY_PATTERN.match(str(value))
    if not match:
        raise ValueError(f"Could not parse quantity: {value!r}")

    number, unit = match.groups()
    if unit is None:
        if dimension == "scalar":
            return float(number)
        raise ValueError(
            f"{dimension} quantity {value!r} needs a unit suffix, one of {sorted(scales)}"
        )
    if unit not in scales:
        raise ValueError(f"Unit '{unit}' is not a {dimension} unit, expected one of {sorted(scales)}")

    return float(number) * scales[unit]


def time_to_seconds(t_au: float) -> float:
    return t_au * AU_TIME_S


def angular_to_hz(omega_au: float) -> float:
    """Convert an angular frequency (energy difference, hbar = 1) to Hz"""
    return omega_au / (2.0 * math.pi * AU_TIME_S)


def hz_to_angular(frequency_hz: float) -> float:
    return 2.0 * math.pi * frequency_hz * AU_TIME_S


def field_to_vpm(field_au: float) -> float:
    return field_au * AU_FIELD_VPM


def length_to_nm(length_au: float) -> float:
    return length_au * AU_LENGTH_M * 1e9
