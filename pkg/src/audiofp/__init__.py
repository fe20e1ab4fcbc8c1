"""Audio fingerprinting and content-based music recommendation.

Pipeline: decode WAV -> mono -> resample -> 60 s segment -> STFT power
spectrogram -> MFCC / chroma / beat features -> 1062-value fingerprint
-> corpus PCA at 95% retained variance -> Euclidean top-K neighbors.
"""

from .fingerprint import FINGERPRINT_SIZE, Fingerprint, PcaModel
from .pipeline import PipelineConfig, fingerprint_clip, fingerprint_wav_bytes
from .wav import AudioClip, decode_wav, encode_wav

__all__ = [
    "FINGERPRINT_SIZE",
    "AudioClip",
    "Fingerprint",
    "PcaModel",
    "PipelineConfig",
    "decode_wav",
    "encode_wav",
    "fingerprint_clip",
    "fingerprint_wav_bytes",
]

__version__ = "0.1.0"
