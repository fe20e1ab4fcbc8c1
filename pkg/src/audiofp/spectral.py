"""Window functions, STFT, and power spectrogram."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InsufficientAudio
from .wav import AudioClip

WINDOW_KINDS = ("hann", "rectangular")


@dataclass
class StftConfig:
    frame_size: int = 2048
    hop: int = 512
    window: str = "hann"

    def __post_init__(self):
        n = self.frame_size
        if n < 2 or (n & (n - 1)) != 0:
            raise DomainError(f"frame_size must be a power of two >= 2, got {n}")
        if not 0 < self.hop <= n:
            raise DomainError(f"hop must be in (0, {n}], got {self.hop}")
        if self.window not in WINDOW_KINDS:
            raise DomainError(f"unknown window {self.window!r}")


@dataclass
class ComplexSpectrum:
    """Complex STFT coefficients, shape (frames, frame_size//2 + 1)."""

    values: np.ndarray
    sample_rate: int
    frame_size: int
    hop: int

    @property
    def num_frames(self) -> int:
        return self.values.shape[0]

    @property
    def num_bins(self) -> int:
        return self.values.shape[1]

    @property
    def frame_times(self) -> np.ndarray:
        return np.arange(self.num_frames) * self.hop / self.sample_rate


def make_window(kind: str, n: int) -> np.ndarray:
    """Analysis window of length n; hann is the periodic form."""
    if n < 2:
        raise DomainError(f"window length must be >= 2, got {n}")
    if kind == "hann":
        return 0.5 * (1.0 - np.cos(2.0 * np.pi * np.arange(n) / n))
    if kind == "rectangular":
        return np.ones(n)
    raise DomainError(f"unknown window {kind!r}")


def num_frames(signal_len: int, frame_size: int, hop: int) -> int:
    """Frames fully inside the signal: floor((L - N) / H) + 1."""
    if signal_len < frame_size:
        return 0
    return (signal_len - frame_size) // hop + 1


def stft(clip: AudioClip, cfg: StftConfig) -> ComplexSpectrum:
    """Short-time Fourier transform over fully interior frames, no padding.

    Keeps the non-negative-frequency bins k in [0, N/2].
    """
    x = np.asarray(clip.samples, dtype=np.float64)
    if x.ndim != 1:
        raise DomainError("stft expects a mono signal")
    n, h = cfg.frame_size, cfg.hop
    m = num_frames(len(x), n, h)
    if m == 0:
        raise InsufficientAudio(
            f"signal has {len(x)} samples, need at least {n}")
    idx = np.arange(n)[None, :] + h * np.arange(m)[:, None]
    frames = x[idx] * make_window(cfg.window, n)
    values = np.fft.rfft(frames, axis=1)
    return ComplexSpectrum(values, clip.sample_rate, n, h)


def power_spectrogram(spec: ComplexSpectrum) -> np.ndarray:
    """Element-wise squared magnitude, shape (frames, bins)."""
    return (spec.values.real ** 2 + spec.values.imag ** 2)
