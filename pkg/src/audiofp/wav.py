"""WAV decode/encode, mono mixdown, resampling, and segment extraction."""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from .errors import DecodeError, DomainError, InsufficientAudio, UnsupportedFormat

_PCM = 1
_IEEE_FLOAT = 3


@dataclass
class AudioClip:
    """Sample buffer plus its rate.

    ``samples`` is float64 in [-1, 1]: shape (n,) for mono, (channels, n)
    for multi-channel audio straight out of the decoder.
    """

    samples: np.ndarray
    sample_rate: int

    @property
    def channels(self) -> int:
        return 1 if self.samples.ndim == 1 else self.samples.shape[0]

    @property
    def num_samples(self) -> int:
        return self.samples.shape[-1]

    @property
    def duration_s(self) -> float:
        return self.num_samples / self.sample_rate


def decode_wav(data: bytes) -> AudioClip:
    """Decode a RIFF/WAVE byte stream into an AudioClip.

    Handles 16/24-bit integer PCM and 32-bit float, 1-2 channels.
    Integer samples are normalized by 2^(bits-1); floats are clipped
    to [-1, 1].
    """
    if len(data) < 12 or data[0:4] != b"RIFF" or data[8:12] != b"WAVE":
        raise DecodeError("not a RIFF/WAVE stream")

    fmt = None
    raw = None
    pos = 12
    while pos + 8 <= len(data):
        chunk_id = data[pos:pos + 4]
        (chunk_size,) = struct.unpack_from("<I", data, pos + 4)
        body = data[pos + 8:pos + 8 + chunk_size]
        if chunk_id == b"fmt ":
            if len(body) < 16:
                raise DecodeError("fmt chunk truncated")
            fmt = struct.unpack_from("<HHIIHH", body, 0)
        elif chunk_id == b"data":
            if len(body) < chunk_size:
                raise DecodeError("data chunk truncated")
            raw = body
        pos += 8 + chunk_size + (chunk_size & 1)  # chunks are word-aligned

    if fmt is None:
        raise DecodeError("missing fmt chunk")
    if raw is None:
        raise DecodeError("missing data chunk")
    if len(raw) == 0:
        raise DecodeError("empty data chunk")

    audio_format, channels, sample_rate, _, _, bits = fmt
    if sample_rate <= 0:
        raise DecodeError("non-positive sample rate in header")
    if channels < 1 or channels > 2:
        raise UnsupportedFormat(f"{channels} channels (only 1-2 supported)")

    if audio_format == _PCM and bits == 16:
        flat = np.frombuffer(raw[:len(raw) - len(raw) % 2], dtype="<i2")
        samples = flat.astype(np.float64) / 32768.0
    elif audio_format == _PCM and bits == 24:
        usable = len(raw) - len(raw) % 3
        b = np.frombuffer(raw[:usable], dtype=np.uint8).reshape(-1, 3)
        vals = (b[:, 0].astype(np.int32)
                | (b[:, 1].astype(np.int32) << 8)
                | (b[:, 2].astype(np.int32) << 16))
        vals = np.where(vals >= 1 << 23, vals - (1 << 24), vals)
        samples = vals.astype(np.float64) / float(1 << 23)
    elif audio_format == _IEEE_FLOAT and bits == 32:
        flat = np.frombuffer(raw[:len(raw) - len(raw) % 4], dtype="<f4")
        samples = np.clip(flat.astype(np.float64), -1.0, 1.0)
    else:
        raise UnsupportedFormat(f"format tag {audio_format}, {bits}-bit")

    if samples.size == 0:
        raise DecodeError("no complete samples in data chunk")
    if samples.size % channels:
        samples = samples[:samples.size - samples.size % channels]
    if channels > 1:
        samples = samples.reshape(-1, channels).T.copy()
    return AudioClip(samples, int(sample_rate))


def encode_wav(clip: AudioClip) -> bytes:
    """Encode a clip as a 16-bit PCM WAV byte stream."""
    if clip.channels > 2:
        raise UnsupportedFormat(f"{clip.channels} channels")
    if clip.samples.ndim == 1:
        interleaved = clip.samples
    else:
        interleaved = clip.samples.T.reshape(-1)
    ints = np.clip(np.round(interleaved * 32768.0), -32768, 32767).astype("<i2")
    raw = ints.tobytes()
    channels = clip.channels
    block_align = 2 * channels
    header = struct.pack(
        "<4sI4s4sIHHIIHH4sI",
        b"RIFF", 36 + len(raw), b"WAVE",
        b"fmt ", 16, _PCM, channels, clip.sample_rate,
        clip.sample_rate * block_align, block_align, 16,
        b"data", len(raw),
    )
    return header + raw


def to_mono(clip: AudioClip) -> AudioClip:
    """Mix down to mono by averaging channels; mono passes through."""
    if clip.samples.ndim == 1:
        return clip
    if clip.channels > 2:
        raise UnsupportedFormat(f"{clip.channels} channels")
    return AudioClip(clip.samples.mean(axis=0), clip.sample_rate)


def resample(clip: AudioClip, target_rate: int) -> AudioClip:
    """Linear-interpolation resample to target_rate.

    Output length is round(n * target / source); identical rates return
    the input samples unchanged.
    """
    if target_rate <= 0:
        raise DomainError(f"target_rate must be positive, got {target_rate}")
    if target_rate == clip.sample_rate:
        return AudioClip(clip.samples.copy(), clip.sample_rate)
    n = clip.num_samples
    out_len = int(round(n * target_rate / clip.sample_rate))
    positions = np.arange(out_len) * (clip.sample_rate / target_rate)
    positions = np.minimum(positions, n - 1)
    src_idx = np.arange(n)
    if clip.samples.ndim == 1:
        out = np.interp(positions, src_idx, clip.samples)
    else:
        out = np.stack([np.interp(positions, src_idx, ch) for ch in clip.samples])
    return AudioClip(out, int(target_rate))


def extract_segment(clip: AudioClip, start_s: float, dur_s: float) -> AudioClip:
    """Cut out [start_s, start_s + dur_s) of audio.

    If the clip ends inside the requested window but still holds at least
    dur_s of audio, the window slides left to the latest position that
    fits. Shorter clips raise InsufficientAudio.
    """
    if dur_s <= 0:
        raise DomainError(f"dur_s must be positive, got {dur_s}")
    sr = clip.sample_rate
    seg_len = int(round(dur_s * sr))
    n = clip.num_samples
    if n < seg_len:
        raise InsufficientAudio(
            f"track is {n / sr:.2f} s long, need at least {dur_s:.2f} s")
    start = int(round(start_s * sr))
    start = min(start, n - seg_len)
    start = max(start, 0)
    return AudioClip(clip.samples[..., start:start + seg_len].copy(), sr)
