"""Waveform loading and fixed-window features for the acoustic prefix.

Input is restricted to 16-bit PCM WAV, the one format the stdlib ``wave``
module decodes unambiguously.  The featurizer summarizes the waveform in
``n_windows`` equal spans with two statistics per span: log mean power
and zero-crossing fraction.  The acoustic backend projects each span's
feature pair to one prefix embedding, so audio enters the decoder the
same way prompt tokens do.
"""

from __future__ import annotations

import math
import wave

import numpy as np

from .errors import AudioLoadError

# Features per window: [log mean power, zero-crossing fraction].
N_FEATURES = 2

# Floor inside the log so silent windows stay finite.
POWER_FLOOR = 1e-10


def load_wave(path: str) -> np.ndarray:
    """Read a PCM WAV file as mono float32 in [-1, 1]."""
    try:
        with wave.open(path, "rb") as fh:
            n_channels = fh.getnchannels()
            sample_width = fh.getsampwidth()
            n_frames = fh.getnframes()
            raw = fh.readframes(n_frames)
    except (OSError, EOFError, wave.Error) as exc:
        raise AudioLoadError(f"cannot read WAV file {path!r}: {exc}") from exc
    if sample_width != 2:
        raise AudioLoadError(
            f"{path!r}: only 16-bit PCM is supported, got {8 * sample_width}-bit samples"
        )
    if n_frames == 0 or not raw:
        raise AudioLoadError(f"{path!r}: empty audio stream")
    samples = np.frombuffer(raw, dtype="<i2").astype(np.float32) / 32768.0
    if n_channels > 1:
        usable = (samples.size // n_channels) * n_channels
        samples = samples[:usable].reshape(-1, n_channels).mean(axis=1)
    return samples.astype(np.float32)


def window_features(samples, n_windows: int) -> np.ndarray:
    """Per-window statistics, shape ``(n_windows, N_FEATURES)`` float32.

    Waveforms shorter than ``n_windows`` samples are zero-padded so every
    window holds at least one sample.
    """
    if n_windows < 1:
        raise ValueError(f"n_windows must be >= 1, got {n_windows}")
    x = np.asarray(samples, dtype=np.float64).ravel()
    if x.size == 0:
        raise AudioLoadError("cannot featurize an empty waveform")
    if x.size < n_windows:
        x = np.pad(x, (0, n_windows - x.size))
    features = np.empty((n_windows, N_FEATURES), dtype=np.float64)
    for i, span in enumerate(np.array_split(x, n_windows)):
        features[i, 0] = math.log(float(np.mean(span * span)) + POWER_FLOOR)
        if span.size > 1:
            flips = np.signbit(span[1:]) != np.signbit(span[:-1])
            features[i, 1] = float(np.mean(flips))
        else:
            features[i, 1] = 0.0
    return features.astype(np.float32)
