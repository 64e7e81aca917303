"""
Pytest configuration shared by all simulator tests

Provides trap bases at both scale tiers and small model systems whose
dynamics can be checked against closed-form results.
"""

import sys
from pathlib import Path

import numpy as np
import pytest

# Add project root to path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from models.eigen_basis import EigenBasis  # noqa: E402
from models.trap_params import TrapParams  # noqa: E402
from tools.src.trap_tools.trap_model import solve_trap  # noqa: E402

CONFIG_DIR = project_root / "configs"


@pytest.fixture(scope="session")
def paper_basis():
    """M=50, D=32, N=16 trap with the default force constants"""
    return solve_trap(TrapParams())


@pytest.fixture(scope="session")
def desk_basis():
    """M=50, D=8, N=4 trap with the default force constants"""
    return solve_trap(TrapParams(dynamical_size=8, computational_size=4))


@pytest.fixture(scope="session")
def harmonic_basis():
    """Paper-size trap without the quartic term"""
    return solve_trap(TrapParams(k_quart=0.0))


@pytest.fixture
def two_level_basis():
    """Resonance at omega = 1 with unit dipole"""
    return EigenBasis.from_levels([0.0, 1.0], [[0.0, 1.0], [1.0, 0.0]], computational_size=2)


@pytest.fixture
def three_level_basis():
    """Anharmonic ladder; the register is the lowest two levels"""
    dipole = np.array([
        [0.0, 1.0, 0.0],
        [1.0, 0.0, 1.2],
        [0.0, 1.2, 0.0],
    ])
    return EigenBasis.from_levels([0.0, 1.0, 2.3], dipole, computational_size=2)


@pytest.fixture
def desk_config_path():
    return CONFIG_DIR / "desk.toml"


@pytest.fixture
def paper_config_path():
    return CONFIG_DIR / "paper.toml"
