"""End-to-end feature pipeline: WAV bytes in, fingerprint out."""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from . import harmony, rhythm, timbre, wav
from .errors import InsufficientAudio, NoOnsets
from .fingerprint import Fingerprint, assemble_fingerprint, row_means
from .spectral import StftConfig, power_spectrogram, stft


@dataclass
class PipelineConfig:
    """Analysis defaults; every field is overridable from the CLI."""

    sample_rate: int = 22050
    frame_size: int = 2048
    hop: int = 512
    window: str = "hann"
    n_mels: int = 26
    n_mfcc: int = 13
    segment_start_s: float = 60.0
    segment_dur_s: float = 60.0
    variance_target: float = 0.95
    k: int = 3
    alpha: float = 680.0
    bpm_min: float = 30.0
    bpm_max: float = 240.0

    def stft_config(self) -> StftConfig:
        return StftConfig(self.frame_size, self.hop, self.window)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "PipelineConfig":
        return cls(**d)


def prepare_clip(clip: wav.AudioClip, cfg: PipelineConfig) -> wav.AudioClip:
    """Mono mixdown, resample to the analysis rate, cut the segment."""
    mono = wav.to_mono(clip)
    mono = wav.resample(mono, cfg.sample_rate)
    return wav.extract_segment(mono, cfg.segment_start_s, cfg.segment_dur_s)


def compute_features(clip: wav.AudioClip, cfg: PipelineConfig) -> dict:
    """All intermediate features for a prepared (mono, resampled) clip.

    Tracks with no usable onsets get an all-zero tempo block instead of
    failing; everything else propagates its error.
    """
    spectrum = stft(clip, cfg.stft_config())
    spec = power_spectrogram(spectrum)
    fb = timbre.build_mel_filterbank(cfg.n_mels, cfg.frame_size,
                                     cfg.sample_rate)
    mel = timbre.mel_energies(spec, fb)
    mfcc = timbre.mfcc(mel, cfg.n_mfcc)
    pitch = harmony.log_freq_spectrogram(spec, cfg.frame_size, cfg.sample_rate)
    chroma = harmony.chromagram(pitch)

    frame_rate = cfg.sample_rate / cfg.hop
    beats = None
    onset = None
    tempo = np.zeros(rhythm.TEMPO_BLOCK_SIZE)
    try:
        onset = rhythm.onset_envelope(mel, frame_rate)
        _, period = rhythm.estimate_tempo(onset, (cfg.bpm_min, cfg.bpm_max))
        beats = rhythm.track_beats(onset, period, cfg.alpha)
        tempo = rhythm.tempo_block(beats, onset)
    except (NoOnsets, InsufficientAudio):
        pass  # silent or too-short material keeps the zero tempo block

    return {
        "spectrogram": spec,
        "mel": mel,
        "mfcc": mfcc,
        "chroma": chroma,
        "onset": onset,
        "beats": beats,
        "tempo_block": tempo,
    }


def fingerprint_clip(track_id: str, clip: wav.AudioClip,
                     cfg: PipelineConfig) -> Fingerprint:
    """Fingerprint a raw (possibly stereo, any-rate) clip."""
    prepared = prepare_clip(clip, cfg)
    feats = compute_features(prepared, cfg)
    return assemble_fingerprint(
        track_id,
        row_means(feats["spectrogram"]),
        row_means(feats["mfcc"]),
        row_means(feats["chroma"]),
        feats["tempo_block"],
    )


def fingerprint_wav_bytes(track_id: str, data: bytes,
                          cfg: PipelineConfig) -> Fingerprint:
    return fingerprint_clip(track_id, wav.decode_wav(data), cfg)
