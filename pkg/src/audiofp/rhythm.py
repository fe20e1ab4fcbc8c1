"""Onset strength, tempo estimation, and dynamic-programming beat tracking."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InsufficientAudio, NoOnsets
from .timbre import LOG_FLOOR

DEFAULT_BPM_RANGE = (30.0, 240.0)
DEFAULT_ALPHA = 680.0

# Fraction of the strongest autocorrelation peak a candidate lag must
# reach before the shortest such lag is taken as the beat period. Plain
# argmax halves click-train tempos: the two-period lag is more
# phase-coherent when the true period is a non-integer frame count.
_PEAK_THRESHOLD = 0.8

TEMPO_BLOCK_SIZE = 12


@dataclass
class OnsetEnvelope:
    """Per-frame onset strength (one value per STFT frame pair)."""

    values: np.ndarray
    frame_rate: float


@dataclass
class BeatSequence:
    beat_frames: np.ndarray
    frame_rate: float
    tempo_bpm: float

    @property
    def beat_times(self) -> np.ndarray:
        return self.beat_frames / self.frame_rate


def onset_envelope(mel: np.ndarray, frame_rate: float) -> OnsetEnvelope:
    """Half-wave-rectified log-mel spectral flux.

    Output length is one less than the frame count (first difference).
    """
    if mel.shape[0] < 2:
        raise InsufficientAudio("need at least 2 frames for onset flux")
    log_mel = np.log(mel + LOG_FLOOR)
    flux = np.diff(log_mel, axis=0)
    return OnsetEnvelope(np.clip(flux, 0.0, None).sum(axis=1), frame_rate)


def estimate_tempo(env: OnsetEnvelope,
                   bpm_range: tuple = DEFAULT_BPM_RANGE):
    """Estimate (tempo_bpm, beat period in frames) from onset autocorrelation.

    The mean-removed, lightly smoothed envelope is autocorrelated over
    the lag range implied by bpm_range. Among lags whose correlation
    reaches _PEAK_THRESHOLD of the maximum, the shortest is climbed to
    its local peak and refined by parabolic interpolation.
    """
    values = env.values
    if not np.any(values > 0):
        raise NoOnsets("onset envelope is all zero")
    bpm_min, bpm_max = bpm_range
    lag_min = max(1, int(round(60.0 * env.frame_rate / bpm_max)))
    lag_max = min(len(values) - 1, int(round(60.0 * env.frame_rate / bpm_min)))
    if lag_max < lag_min:
        raise InsufficientAudio("envelope too short for tempo estimation")

    x = values - values.mean()
    kernel = 0.5 * (1.0 - np.cos(2.0 * np.pi * np.arange(1, 5) / 5.0))
    x = np.convolve(x, kernel, mode="same")

    full = np.correlate(x, x, mode="full")[len(x) - 1:]
    corr = full[lag_min:lag_max + 1]
    peak = corr.max()
    if peak <= 0:
        raise NoOnsets("no periodicity found in onset envelope")

    lag = lag_min + int(np.argmax(corr >= _PEAK_THRESHOLD * peak))
    # Climb to the local maximum before interpolating.
    while lag + 1 <= lag_max and full[lag + 1] > full[lag]:
        lag += 1
    period = float(lag)
    if lag_min < lag < len(full) - 1:
        a, b, c = full[lag - 1], full[lag], full[lag + 1]
        denom = a - 2.0 * b + c
        if denom < 0:
            period += 0.5 * (a - c) / denom
    tempo = 60.0 * env.frame_rate / period
    return tempo, period


def track_beats(env: OnsetEnvelope, period: float,
                alpha: float = DEFAULT_ALPHA) -> BeatSequence:
    """Beat positions via the classic dynamic program.

    Each frame's score is its onset strength plus the best predecessor
    score within [t - 2*period, t - period/2], where the predecessor is
    charged alpha * (log(gap / period))^2 for deviating from the ideal
    spacing. The envelope is normalized to unit standard deviation so
    alpha is scale-free. Backtracking starts at the overall best frame.
    """
    if len(env.values) == 0:
        raise NoOnsets("empty onset envelope")
    if period < 1:
        raise NoOnsets(f"beat period must be >= 1 frame, got {period}")

    std = env.values.std()
    onset = env.values / std if std > 0 else env.values.astype(np.float64)
    n = len(onset)
    window_lo = int(round(2.0 * period))
    window_hi = max(1, int(round(period / 2.0)))
    gaps = np.arange(window_hi, window_lo + 1, dtype=np.float64)
    penalty = -alpha * np.log(gaps / period) ** 2

    score = np.zeros(n)
    backlink = np.full(n, -1, dtype=np.int64)
    for t in range(n):
        lo = t - window_lo
        hi = t - window_hi
        if hi < 0:
            score[t] = onset[t]
            continue
        lo_clip = max(lo, 0)
        gap_hi = t - lo_clip
        # penalty is indexed by gap - window_hi; reverse to follow tau ascending
        cand = penalty[:gap_hi - window_hi + 1][::-1] + score[lo_clip:hi + 1]
        best = int(np.argmax(cand))
        if cand[best] > 0:
            score[t] = onset[t] + cand[best]
            backlink[t] = lo_clip + best
        else:
            score[t] = onset[t]

    beats = [int(np.argmax(score))]
    while backlink[beats[-1]] >= 0:
        beats.append(int(backlink[beats[-1]]))
    beat_frames = np.array(beats[::-1], dtype=np.int64)
    tempo = 60.0 * env.frame_rate / period
    return BeatSequence(beat_frames, env.frame_rate, tempo)


def tempo_block(beats: BeatSequence, env: OnsetEnvelope) -> np.ndarray:
    """Twelve tempo statistics for the fingerprint.

    Layout: tempo_bpm, beat_count, mean/std/min/max/median inter-beat
    interval (seconds), onset mean/std/max, beat-strength mean/std.
    All zeros when no beats were found.
    """
    out = np.zeros(TEMPO_BLOCK_SIZE)
    if len(beats.beat_frames) == 0:
        return out
    times = beats.beat_times
    ibis = np.diff(times)
    strengths = env.values[beats.beat_frames]
    out[0] = beats.tempo_bpm
    out[1] = len(beats.beat_frames)
    if len(ibis) > 0:
        out[2] = ibis.mean()
        out[3] = ibis.std()
        out[4] = ibis.min()
        out[5] = ibis.max()
        out[6] = np.median(ibis)
    out[7] = env.values.mean()
    out[8] = env.values.std()
    out[9] = env.values.max()
    out[10] = strengths.mean()
    out[11] = strengths.std()
    return out
