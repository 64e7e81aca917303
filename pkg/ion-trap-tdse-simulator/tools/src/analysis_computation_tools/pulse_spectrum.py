"""
Pulse Spectrum Tool

Power spectra of control fields, identification of their lines and
band-pass filtering of optimized fields.
"""

import logging
from typing import Iterable, Optional, Tuple

import numpy as np
from scipy import fft, signal

from models.dynamics import ControlField
from models.eigen_basis import EigenBasis, TransitionLine
from models.spectrum import Spectrum
from tools.src.trap_tools.trap_model import transition_table
from tools.src.units import AU_TIME_S

logger = logging.getLogger(__name__)

PEAK_THRESHOLD = 0.01
PARSEVAL_TOLERANCE = 1e-6
FILTER_LOW_HZ = 0.5e6
FILTER_MARGIN = 1.05


def spectrum(field: ControlField, threshold: float = PEAK_THRESHOLD) -> Spectrum:
    """
    One-sided power spectrum |S(nu)|^2 of the sampled field

    The transform is taken on the raw samples without windowing and scaled
    by dt, so sum |S|^2 / (n dt) reproduces sum E^2 dt before normalization.

    Args:
        field: Control field
        threshold: Relative height above which local maxima count as lines

    Returns:
        Spectrum with frequencies in Hz, power normalized to peak 1 and the
        frequencies of the identified lines
    """
    samples = field.samples
    count = samples.shape[0]
    transform = fft.rfft(samples) * field.dt
    power = np.abs(transform) ** 2

    # one-sided sum: interior bins stand for two, the Nyquist bin (even n) for one
    weights = np.full(power.shape[0], 2.0)
    weights[0] = 1.0
    if count % 2 == 0:
        weights[-1] = 1.0
    spectral_energy = float(np.sum(weights * power) / (count * field.dt))
    energy = float(np.sum(samples ** 2) * field.dt)
    parseval_error = abs(spectral_energy - energy) / energy if energy > 0 else 0.0
    if parseval_error > PARSEVAL_TOLERANCE:
        logger.warning("Spectrum violates Parseval's identity: relative error %.2e", parseval_error)

    frequencies = fft.rfftfreq(count, d=field.dt) / AU_TIME_S
    peak = float(np.max(power))
    normalized = power / peak if peak > 0 else np.zeros_like(power)
    indices, _ = signal.find_peaks(normalized, height=threshold) if peak > 0 else (np.array([], dtype=int), None)

    return Spectrum(
        frequencies=frequencies,
        power=normalized,
        peak_frequencies=frequencies[indices],
        fluence=field.fluence(),
        parseval_error=parseval_error,
    )


def line_offsets(result: Spectrum, lines: Iterable[TransitionLine]) -> np.ndarray:
    """Distance in bins from every spectral peak to the nearest transition line"""
    line_frequencies = np.array([line.frequency_hz for line in lines])
    if line_frequencies.size == 0 or result.peak_frequencies.size == 0:
        return np.array([])
    distances = np.abs(result.peak_frequencies[:, None] - line_frequencies[None, :])
    return np.min(distances, axis=1) / result.resolution


def sine_frequencies(field: ControlField) -> np.ndarray:
    """Frequencies k/(2 t_pulse) in Hz of the sine modes used by bandpass_filter"""
    modes = np.arange(1, field.n_steps)
    return modes / (2.0 * field.t_pulse * AU_TIME_S)


def bandpass_filter(field: ControlField, band: Tuple[float, float]) -> ControlField:
    """
    Keep the spectral content of the field inside [nu_lo, nu_hi]

    The interior samples are expanded in the sine modes sin(pi k t/t_pulse)
    (orthonormal DST-I), modes outside the band are dropped and the field is
    transformed back. The result is real, vanishes at both ends and the
    operation is an exact projection: filtering twice equals filtering once.

    Args:
        field: Field to filter
        band: (nu_lo, nu_hi) in Hz; nu_hi <= nu_lo gives the zero field

    Raises:
        ValueError: Negative lower edge or upper edge above the Nyquist frequency
    """
    low, high = float(band[0]), float(band[1])
    nyquist = 1.0 / (2.0 * field.dt * AU_TIME_S)
    if low < 0:
        raise ValueError(f"Lower band edge must be non-negative, got {low}")
    if high > nyquist * (1.0 + 1e-12):
        raise ValueError(f"Upper band edge {high:.6g} Hz exceeds the Nyquist frequency {nyquist:.6g} Hz")

    samples = np.zeros_like(field.samples)
    if high > low and field.n_steps > 1:
        coefficients = fft.dst(field.samples[1:-1], type=1, norm="ortho")
        frequencies = sine_frequencies(field)
        coefficients[(frequencies < low) | (frequencies > high)] = 0.0
        samples[1:-1] = fft.idst(coefficients, type=1, norm="ortho")

    logger.debug("Band-pass [%.4g, %.4g] Hz kept fluence %.4e of %.4e", low, high,
                 float(np.sum(samples ** 2) * field.dt), float(np.sum(field.samples ** 2) * field.dt))
    return ControlField(samples, field.dt)


def default_filter_band(basis: EigenBasis, size: Optional[int] = None) -> Tuple[float, float]:
    """[0.5 MHz, 1.05 x the highest Delta nu = 3 transition frequency]"""
    lines = transition_table(basis, (3,), size)
    if not lines:
        lines = transition_table(basis, (1,), size)
    highest = max(line.frequency_hz for line in lines)
    return FILTER_LOW_HZ, FILTER_MARGIN * highest


def spectrum_difference(first: Spectrum, second: Spectrum) -> Tuple[np.ndarray, np.ndarray]:
    """
    Difference of two normalized spectra on the frequency grid of the first

    The second spectrum is linearly interpolated; the common grid stops at
    the smaller of the two highest frequencies.

    Returns:
        (frequencies in Hz, first.power - second.power)
    """
    upper = min(first.frequencies[-1], second.frequencies[-1])
    mask = first.frequencies <= upper
    frequencies = first.frequencies[mask]
    resampled = np.interp(frequencies, second.frequencies, second.power)
    return frequencies, first.power[mask] - resampled
