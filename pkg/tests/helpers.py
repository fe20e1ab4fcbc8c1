"""Shared signal synthesis for the test suite."""

import struct

import numpy as np

from audiofp.wav import AudioClip, encode_wav

SR = 22050
FRAME_SIZE = 2048
HOP = 512


def wav_bytes(samples, sr=SR):
    return encode_wav(AudioClip(np.asarray(samples, dtype=np.float64), sr))


def raw_wav(channels_data, sr, bits=16, audio_format=1):
    """Hand-built WAV from raw integer/float sample values (interleaved)."""
    if bits == 16:
        raw = struct.pack(f"<{len(channels_data)}h", *channels_data)
    elif bits == 32 and audio_format == 3:
        raw = struct.pack(f"<{len(channels_data)}f", *channels_data)
    else:
        raise ValueError(bits)
    n_ch = 1
    block = (bits // 8) * n_ch
    header = struct.pack(
        "<4sI4s4sIHHIIHH4sI", b"RIFF", 36 + len(raw), b"WAVE",
        b"fmt ", 16, audio_format, n_ch, sr, sr * block, block, bits,
        b"data", len(raw))
    return header + raw


def sine(freq, dur_s, sr=SR, amp=0.5, phase=0.0):
    t = np.arange(int(round(dur_s * sr))) / sr
    return amp * np.sin(2 * np.pi * freq * t + phase)


def click_train(bpm, dur_s, sr=SR, amp=0.8, seed=0, snr_db=None,
                start_s=0.5, burst_len=256):
    """Percussive burst train; returns (samples, click start samples)."""
    rng = np.random.default_rng(seed)
    n = int(round(dur_s * sr))
    x = np.zeros(n)
    step = 60.0 / bpm * sr
    starts = np.round(np.arange(start_s * sr, n - sr, step)).astype(int)
    shape = np.exp(-np.arange(burst_len) / 40.0)
    burst = shape * rng.normal(0, 1, burst_len)
    for s in starts:
        x[s:s + burst_len] += amp * burst
    if snr_db is not None:
        p_sig = np.mean(x ** 2)
        x = x + rng.normal(0, np.sqrt(p_sig / 10 ** (snr_db / 10.0)), n)
    return np.clip(x, -1, 1), starts


def expected_onset_frames(click_samples, frame_size=FRAME_SIZE, hop=HOP):
    """Envelope index where each click's spectral flux spike lands."""
    m_first = np.maximum(0, np.ceil((click_samples - frame_size + 1) / hop))
    return m_first.astype(int) - 1


def genre_track(genre, rng, dur_s=130.0, sr=SR):
    """Synthetic track for one of three artificial genres.

    'harmonic': 3-partial tone with a ~90 BPM click overlay.
    'bursts':   band-limited noise bursts at ~150 BPM.
    'chords':   slow sustained low-register triads, no clicks.
    """
    n = int(round(dur_s * sr))
    t = np.arange(n) / sr
    noise = rng.normal(0, 0.004, n)
    if genre == "harmonic":
        f0 = 220.0 * 2 ** rng.uniform(-0.04, 0.04)
        x = (np.sin(2 * np.pi * f0 * t)
             + 0.5 * np.sin(2 * np.pi * 2 * f0 * t)
             + 0.33 * np.sin(2 * np.pi * 3 * f0 * t)) * 0.2
        clicks, _ = click_train(90 + rng.uniform(-3, 3), dur_s, sr,
                                amp=0.5, seed=int(rng.integers(1 << 30)))
        x = x + clicks
    elif genre == "bursts":
        white = rng.normal(0, 1, n)
        spectrum = np.fft.rfft(white)
        freqs = np.fft.rfftfreq(n, 1 / sr)
        spectrum[(freqs < 2000) | (freqs > 4000)] = 0
        band = np.fft.irfft(spectrum, n)
        band /= np.abs(band).max()
        bpm = 150 + rng.uniform(-4, 4)
        period = int(round(60.0 / bpm * sr))
        gate = np.zeros(n)
        burst = int(0.1 * sr)
        for s in range(0, n - burst, period):
            gate[s:s + burst] = np.linspace(1, 0.2, burst)
        x = 0.6 * band * gate
    elif genre == "chords":
        chords = [(130.81, 164.81, 196.00), (146.83, 174.61, 220.00),
                  (123.47, 155.56, 185.00)]
        x = np.zeros(n)
        span = int(5 * sr)
        for i, s in enumerate(range(0, n, span)):
            freqs = chords[i % len(chords)]
            seg_t = t[s:s + span]
            seg = sum(np.sin(2 * np.pi * f * seg_t + rng.uniform(0, 6.28))
                      for f in freqs)
            ramp = np.minimum(1, np.arange(len(seg_t)) / (0.5 * sr))
            x[s:s + span] = 0.15 * seg * ramp
    else:
        raise ValueError(genre)
    x = x + noise
    peak = np.abs(x).max()
    if peak > 0.95:
        x = x * (0.95 / peak)
    return x


def build_genre_corpus(root, tracks_per_genre=10, dur_s=130.0, seed=1234):
    """Write a 3-genre WAV corpus plus tags CSV; returns (dir, tags_path)."""
    rng = np.random.default_rng(seed)
    root.mkdir(parents=True, exist_ok=True)
    rows = []
    for genre in ("harmonic", "bursts", "chords"):
        for i in range(tracks_per_genre):
            tid = f"{genre}_{i:02d}"
            x = genre_track(genre, rng, dur_s)
            (root / f"{tid}.wav").write_bytes(wav_bytes(x))
            rows.append(f"{tid},{tid}.wav,{genre}")
    tags = root / "tags.csv"
    tags.write_text("track_id,path,genres\n" + "\n".join(rows) + "\n")
    return root, tags
