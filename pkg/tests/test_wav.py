import numpy as np
import pytest

from audiofp.errors import (DecodeError, DomainError, InsufficientAudio,
                            UnsupportedFormat)
from audiofp.spectral import StftConfig, power_spectrogram, stft
from audiofp.wav import (AudioClip, decode_wav, encode_wav, extract_segment,
                         resample, to_mono)
from helpers import raw_wav, wav_bytes


class TestDecode:
    def test_16bit_normalization(self):
        data = raw_wav([0, 16384, -16384, 32767], sr=8000)
        clip = decode_wav(data)
        assert clip.sample_rate == 8000
        np.testing.assert_allclose(clip.samples, [0, 0.5, -0.5, 32767 / 32768])

    def test_empty_data_chunk(self):
        import struct
        header = struct.pack(
            "<4sI4s4sIHHIIHH4sI", b"RIFF", 36, b"WAVE",
            b"fmt ", 16, 1, 1, 8000, 16000, 2, 16, b"data", 0)
        with pytest.raises(DecodeError):
            decode_wav(header)

    def test_not_riff(self):
        with pytest.raises(DecodeError):
            decode_wav(b"OGGS" + b"\x00" * 64)

    def test_stereo_channels_equal_length(self):
        left = np.linspace(-0.5, 0.5, 100)
        right = -left
        clip = AudioClip(np.stack([left, right]), 8000)
        decoded = decode_wav(encode_wav(clip))
        assert decoded.channels == 2
        assert decoded.samples.shape == (2, 100)

    def test_float32(self):
        import struct
        data = raw_wav([0.0, 0.25, -0.25, 1.5], sr=8000, bits=32,
                       audio_format=3)
        clip = decode_wav(data)
        np.testing.assert_allclose(clip.samples, [0, 0.25, -0.25, 1.0])

    def test_unsupported_bit_depth(self):
        import struct
        raw = b"\x00" * 8
        header = struct.pack(
            "<4sI4s4sIHHIIHH4sI", b"RIFF", 36 + len(raw), b"WAVE",
            b"fmt ", 16, 1, 1, 8000, 8000, 1, 8, b"data", len(raw))
        with pytest.raises(UnsupportedFormat):
            decode_wav(header + raw)

    def test_round_trip_within_quantization(self):
        rng = np.random.default_rng(7)
        x = rng.uniform(-1, 1, 5000)
        clip = AudioClip(x, 22050)
        back = decode_wav(encode_wav(clip))
        assert np.abs(back.samples - x).max() <= 1 / 32768


class TestToMono:
    def test_stereo_mean(self):
        clip = AudioClip(np.array([[1.0], [0.0]]), 8000)
        np.testing.assert_allclose(to_mono(clip).samples, [0.5])

    def test_mono_identity(self):
        clip = AudioClip(np.array([0.3, -0.3]), 8000)
        np.testing.assert_array_equal(to_mono(clip).samples, [0.3, -0.3])

    def test_stereo_pairwise(self):
        clip = AudioClip(np.array([[0.5, 0.5], [-0.5, 0.5]]), 8000)
        np.testing.assert_allclose(to_mono(clip).samples, [0.0, 0.5])


class TestResample:
    def test_identity_when_rates_match(self):
        rng = np.random.default_rng(3)
        x = rng.uniform(-1, 1, 1000)
        out = resample(AudioClip(x, 22050), 22050)
        np.testing.assert_array_equal(out.samples, x)

    def test_constant_signal(self):
        clip = AudioClip(np.full(44100, 0.7), 44100)
        out = resample(clip, 22050)
        assert out.sample_rate == 22050
        assert out.num_samples == 22050
        np.testing.assert_allclose(out.samples, 0.7)

    def test_output_length(self):
        clip = AudioClip(np.zeros(1000), 48000)
        assert resample(clip, 16000).num_samples == round(1000 * 16000 / 48000)

    def test_sine_peak_survives(self):
        # Spectral-peak oracle: dominant bin frequency unchanged at ~440 Hz.
        t = np.arange(44100) / 44100
        x = 0.5 * np.sin(2 * np.pi * 440 * t)
        down = resample(AudioClip(x, 44100), 22050)

        def peak_freq(clip):
            cfg = StftConfig(2048, 512, "hann")
            spec = power_spectrogram(stft(clip, cfg))
            k = int(np.argmax(spec.mean(axis=0)))
            return k * clip.sample_rate / 2048

        assert abs(peak_freq(down) - 440) < 22050 / 2048

    def test_rejects_bad_rate(self):
        with pytest.raises(DomainError):
            resample(AudioClip(np.zeros(10), 8000), 0)


class TestExtractSegment:
    def test_standard_window(self):
        sr = 22050
        clip = AudioClip(np.arange(180 * sr, dtype=np.float64) / (180 * sr),
                         sr)
        seg = extract_segment(clip, 60, 60)
        assert seg.num_samples == 60 * sr
        assert seg.samples[0] == clip.samples[60 * sr]

    def test_slides_left_when_short(self):
        sr = 1000
        clip = AudioClip(np.arange(90 * sr, dtype=np.float64), sr)
        seg = extract_segment(clip, 60, 60)
        assert seg.samples[0] == 30 * sr  # window moved to [30 s, 90 s)
        assert seg.num_samples == 60 * sr

    def test_too_short(self):
        clip = AudioClip(np.zeros(30 * 1000), 1000)
        with pytest.raises(InsufficientAudio):
            extract_segment(clip, 60, 60)


class TestProperties:
    def test_mono_segment_commute(self):
        rng = np.random.default_rng(11)
        stereo = AudioClip(rng.uniform(-1, 1, (2, 5000)), 1000)
        a = extract_segment(to_mono(stereo), 1, 2)
        b = to_mono(extract_segment(stereo, 1, 2))
        np.testing.assert_array_equal(a.samples, b.samples)

    def test_encode_decode_many(self):
        rng = np.random.default_rng(12)
        for _ in range(5):
            x = rng.uniform(-1, 1, 777)
            back = decode_wav(wav_bytes(x, 8000))
            assert np.abs(back.samples - x).max() <= 1 / 32768
