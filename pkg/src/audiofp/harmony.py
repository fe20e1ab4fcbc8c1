"""MIDI-pitch (log-frequency) spectrogram and chromagram."""

from __future__ import annotations

import numpy as np

NUM_PITCHES = 128
NUM_CHROMA = 12


def bin_to_midi(k: int, frame_size: int, sample_rate: int):
    """MIDI note for FFT bin k, or None when out of the 0-127 range.

    Equal temperament with A4 = 69 at 440 Hz; bin 0 (DC) has no pitch.
    """
    if k <= 0:
        return None
    f = k * sample_rate / frame_size
    p = int(np.round(69.0 + 12.0 * np.log2(f / 440.0)))
    return p if 0 <= p <= 127 else None


def pitch_map(num_bins: int, frame_size: int, sample_rate: int) -> np.ndarray:
    """Per-bin MIDI pitch, -1 for unmapped bins."""
    pitches = np.full(num_bins, -1, dtype=np.int64)
    for k in range(num_bins):
        p = bin_to_midi(k, frame_size, sample_rate)
        if p is not None:
            pitches[k] = p
    return pitches


def log_freq_spectrogram(power_spec: np.ndarray, frame_size: int,
                         sample_rate: int) -> np.ndarray:
    """Fold FFT bins into 128 MIDI pitch rows, shape (frames, 128).

    Bins whose pitch falls outside [0, 127] (including DC) are dropped.
    """
    pitches = pitch_map(power_spec.shape[1], frame_size, sample_rate)
    out = np.zeros((power_spec.shape[0], NUM_PITCHES))
    mapped = pitches >= 0
    np.add.at(out.T, pitches[mapped], power_spec[:, mapped].T)
    return out


def chromagram(pitch_spec: np.ndarray) -> np.ndarray:
    """Fold pitches into 12 chroma classes by p mod 12, shape (frames, 12)."""
    out = np.zeros((pitch_spec.shape[0], NUM_CHROMA))
    for c in range(NUM_CHROMA):
        out[:, c] = pitch_spec[:, c::NUM_CHROMA].sum(axis=1)
    return out
