"""
Pytest configuration for application-layer tests
"""

import logging

import pytest


@pytest.fixture(autouse=True)
def restore_root_logger():
    """setup_logging replaces the root handlers; put the originals back"""
    root = logging.getLogger()
    handlers, level = list(root.handlers), root.level
    yield
    for handler in root.handlers:
        if handler not in handlers:
            handler.close()
    root.handlers[:] = handlers
    root.setLevel(level)


@pytest.fixture
def tiny_config_text():
    """Desk tier with 100-step pulses and a two-update budget"""
    return (
        'tier = "desk"\n'
        '\n'
        '[control]\n'
        't_pulse = "200 ns"\n'
        'dt = "2 ns"\n'
        'max_iterations = 2\n'
        'log_every = 1\n'
        '\n'
        '[simulation]\n'
        'n_pulses = 3\n'
    )


@pytest.fixture
def tiny_config_path(tmp_path, tiny_config_text):
    path = tmp_path / "tiny.toml"
    path.write_text(tiny_config_text)
    return path
