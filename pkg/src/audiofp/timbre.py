"""Mel scale, triangular filterbank energies, and MFCC extraction."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ShapeError

LOG_FLOOR = 1e-10


@dataclass
class MelFilterBank:
    """Triangular filters, weights shape (num_filters, num_bins)."""

    weights: np.ndarray
    center_freqs: np.ndarray

    @property
    def num_filters(self) -> int:
        return self.weights.shape[0]


def hz_to_mel(f: float) -> float:
    """Perceptual mel value of a frequency: 1127 * ln(1 + f/700)."""
    if np.any(np.asarray(f) < 0):
        raise DomainError(f"frequency must be non-negative, got {f}")
    return 1127.0 * np.log(1.0 + np.asarray(f, dtype=np.float64) / 700.0)


def mel_to_hz(m):
    return 700.0 * (np.exp(np.asarray(m, dtype=np.float64) / 1127.0) - 1.0)


def build_mel_filterbank(num_filters: int, frame_size: int,
                         sample_rate: int) -> MelFilterBank:
    """Equally mel-spaced triangles between 0 Hz and Nyquist.

    num_filters + 2 boundary points are placed on the mel scale, mapped
    back to fractional FFT bin indices, and each triangle is evaluated
    at the integer bins.
    """
    if num_filters < 1:
        raise DomainError(f"need at least one filter, got {num_filters}")
    num_bins = frame_size // 2 + 1
    mel_bounds = np.linspace(hz_to_mel(0.0), hz_to_mel(sample_rate / 2.0),
                             num_filters + 2)
    hz_bounds = mel_to_hz(mel_bounds)
    bin_bounds = hz_bounds * frame_size / sample_rate
    k = np.arange(num_bins, dtype=np.float64)
    weights = np.zeros((num_filters, num_bins))
    for m in range(num_filters):
        lo, mid, hi = bin_bounds[m], bin_bounds[m + 1], bin_bounds[m + 2]
        rising = (k - lo) / (mid - lo)
        falling = (hi - k) / (hi - mid)
        weights[m] = np.clip(np.minimum(rising, falling), 0.0, None)
    return MelFilterBank(weights, hz_bounds[1:-1])


def mel_energies(power_spec: np.ndarray, fb: MelFilterBank) -> np.ndarray:
    """Filterbank energies per frame, shape (frames, num_filters)."""
    if power_spec.shape[1] != fb.weights.shape[1]:
        raise ShapeError(
            f"spectrogram has {power_spec.shape[1]} bins, "
            f"filterbank expects {fb.weights.shape[1]}")
    return power_spec @ fb.weights.T


def dct_basis(n_coeffs: int, num_filters: int) -> np.ndarray:
    """DCT-II basis, shape (n_coeffs, num_filters)."""
    n = np.arange(n_coeffs)[:, None]
    m = np.arange(num_filters)[None, :]
    return np.cos(np.pi * n * (m + 0.5) / num_filters)


def mfcc(mel: np.ndarray, n_coeffs: int = 13) -> np.ndarray:
    """Cepstral coefficients: DCT-II of log-compressed mel energies."""
    num_filters = mel.shape[1]
    if n_coeffs > num_filters:
        raise DomainError(
            f"n_coeffs {n_coeffs} exceeds filter count {num_filters}")
    log_mel = np.log(mel + LOG_FLOOR)
    return log_mel @ dct_basis(n_coeffs, num_filters).T
