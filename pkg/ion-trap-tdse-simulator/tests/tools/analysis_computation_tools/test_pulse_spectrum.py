"""
Tests for the Pulse Spectrum Tool

Tests spectral analysis of control fields including:
- Peak identification and Parseval's identity
- Line structure of the multi-line guess field
- Band-pass filtering as an exact projection
"""

import numpy as np
import pytest

from models.control import OctConfig
from models.dynamics import ControlField
from tools.src.analysis_computation_tools.pulse_spectrum import (
    FILTER_LOW_HZ,
    bandpass_filter,
    default_filter_band,
    line_offsets,
    sine_frequencies,
    spectrum,
    spectrum_difference,
)
from tools.src.control_tools.guess_field import make_guess_field
from tools.src.trap_tools.trap_model import transition_table
from tools.src.units import AU_TIME_S

pytestmark = pytest.mark.unit


def _windowed_sine(omega: float = 1.0, t_pulse: float = 200.0, n_steps: int = 4000) -> ControlField:
    return ControlField.from_function(
        lambda t: np.sin(omega * t) * np.sin(np.pi * t / t_pulse) ** 2, t_pulse, n_steps
    )


def _nyquist(field: ControlField) -> float:
    return 1.0 / (2.0 * field.dt * AU_TIME_S)


@pytest.fixture(scope="module")
def paper_guess(paper_basis):
    config = OctConfig(t_pulse="96 us", dt="960 ps", alpha0=1e15)
    return make_guess_field(paper_basis, config)


class TestSpectrum:
    """Test suite for spectrum"""

    def test_single_line(self):
        field = _windowed_sine()
        result = spectrum(field)
        expected_hz = 1.0 / (2.0 * np.pi * AU_TIME_S)

        assert result.peak_frequencies.shape == (1,)
        assert abs(result.peak_frequencies[0] - expected_hz) <= result.resolution
        assert np.max(result.power) == pytest.approx(1.0)

    def test_parseval(self):
        rng = np.random.default_rng(7)
        for count in (1001, 1000):
            field = ControlField(rng.standard_normal(count), 0.3)
            assert spectrum(field).parseval_error < 1e-10

    def test_fluence_reported(self):
        field = _windowed_sine()
        assert spectrum(field).fluence == pytest.approx(field.fluence())

    def test_zero_field(self):
        result = spectrum(ControlField.zeros(10.0, 100))
        assert result.peak_frequencies.size == 0
        assert not np.any(result.power)
        assert result.parseval_error == 0.0

    def test_resolution(self):
        field = _windowed_sine()
        expected = 1.0 / ((field.n_steps + 1) * field.dt * AU_TIME_S)
        assert spectrum(field).resolution == pytest.approx(expected)


class TestGuessFieldLines:
    """The guess field carries one line per register transition"""

    def test_line_count(self, paper_basis, paper_guess):
        lines = transition_table(paper_basis, (1, 3))
        result = spectrum(paper_guess)
        assert len(lines) == 28
        assert result.peak_frequencies.size == 28

    def test_peaks_sit_on_lines(self, paper_basis, paper_guess):
        offsets = line_offsets(spectrum(paper_guess), transition_table(paper_basis, (1, 3)))
        assert offsets.size == 28
        assert np.all(offsets <= 1.0)

    def test_no_lines(self):
        result = spectrum(ControlField.zeros(10.0, 100))
        assert line_offsets(result, []).size == 0


class TestBandpassFilter:
    """Test suite for bandpass_filter"""

    def test_full_band_is_identity(self):
        field = _windowed_sine()
        filtered = bandpass_filter(field, (0.0, _nyquist(field)))
        assert np.allclose(filtered.samples, field.samples, atol=1e-10)

    def test_empty_band_gives_zero(self):
        field = _windowed_sine()
        assert not np.any(bandpass_filter(field, (1e9, 1e9)).samples)
        assert not np.any(bandpass_filter(field, (2e9, 1e9)).samples)

    def test_idempotent(self):
        field = _windowed_sine()
        band = (0.5 / (2.0 * np.pi * AU_TIME_S), 2.0 / (2.0 * np.pi * AU_TIME_S))
        once = bandpass_filter(field, band)
        twice = bandpass_filter(once, band)
        assert np.allclose(twice.samples, once.samples, atol=1e-12)

    def test_ends_vanish(self):
        field = ControlField(np.ones(101), 0.1)
        filtered = bandpass_filter(field, (0.0, _nyquist(field)))
        assert filtered.samples[0] == 0.0
        assert filtered.samples[-1] == 0.0

    def test_removes_line_outside_band(self):
        low = _windowed_sine(omega=1.0)
        high = _windowed_sine(omega=3.0)
        combined = ControlField(low.samples + high.samples, low.dt)
        band = (0.0, 2.0 / (2.0 * np.pi * AU_TIME_S))
        filtered = bandpass_filter(combined, band)
        assert np.max(np.abs(filtered.samples - low.samples)) < 5e-3

    def test_band_validation(self):
        field = _windowed_sine()
        with pytest.raises(ValueError, match="non-negative"):
            bandpass_filter(field, (-1.0, 1e6))
        with pytest.raises(ValueError, match="Nyquist"):
            bandpass_filter(field, (0.0, 2.0 * _nyquist(field)))

    def test_sine_frequencies(self):
        field = ControlField.zeros(10.0, 100)
        frequencies = sine_frequencies(field)
        assert frequencies.shape == (99,)
        assert frequencies[0] == pytest.approx(1.0 / (20.0 * AU_TIME_S))

    def test_default_band_keeps_guess(self, paper_basis, paper_guess):
        band = default_filter_band(paper_basis)
        highest = max(line.frequency_hz for line in transition_table(paper_basis, (3,)))
        assert band == (FILTER_LOW_HZ, pytest.approx(1.05 * highest))

        filtered = bandpass_filter(paper_guess, band)
        assert filtered.fluence() == pytest.approx(paper_guess.fluence(), rel=1e-3)


class TestSpectrumDifference:
    """Test suite for spectrum_difference"""

    def test_self_difference(self):
        result = spectrum(_windowed_sine())
        frequencies, difference = spectrum_difference(result, result)
        assert frequencies.shape == result.frequencies.shape
        assert not np.any(difference)

    def test_common_grid(self):
        coarse = spectrum(_windowed_sine(n_steps=2000))
        fine = spectrum(_windowed_sine(n_steps=4000))
        frequencies, difference = spectrum_difference(fine, coarse)
        assert frequencies[-1] <= coarse.frequencies[-1]
        assert np.max(np.abs(difference)) < 0.05
