"""Shared constants and builders for the exporter tests.

Lives outside conftest.py so test modules can import it by a unique
name even when several test trees run in one pytest invocation.
"""

from __future__ import annotations

import math
import os
import wave
from dataclasses import dataclass

import numpy as np

from export_bridge import ExportJob, ExportResult, render_prompt

TRANSCRIPT = "kim attends yale"
KEYWORDS = ["yale", "new york"]

ACOUSTIC_SEED = 7
LANGUAGE_SEED = 8
ACOUSTIC_WIDTH = 32
LANGUAGE_WIDTH = 16


@dataclass(frozen=True)
class CheckpointPair:
    acoustic_dir: str
    language_dir: str
    chars: str


@dataclass(frozen=True)
class Exported:
    job: ExportJob
    result: ExportResult
    pair: CheckpointPair
    wav_path: str


def write_tone(path: str, seconds: float = 1.0, rate: int = 16000, freq: float = 440.0) -> None:
    t = np.arange(int(seconds * rate)) / rate
    samples = (0.4 * np.sin(2.0 * math.pi * freq * t) * 32767.0).astype("<i2")
    with wave.open(path, "wb") as fh:
        fh.setnchannels(1)
        fh.setsampwidth(2)
        fh.setframerate(rate)
        fh.writeframes(samples.tobytes())


def make_job(pair: CheckpointPair, wav_path: str, out_dir: str, prompt: str | None = None) -> ExportJob:
    return ExportJob(
        acoustic_checkpoint=pair.acoustic_dir,
        language_checkpoint=pair.language_dir,
        audio_path=wav_path,
        transcript=TRANSCRIPT,
        prompt=render_prompt(KEYWORDS) if prompt is None else prompt,
        acoustic_out=os.path.join(out_dir, "acoustic.mgfr"),
        language_out=os.path.join(out_dir, "language.mgfr"),
        vocab_out=os.path.join(out_dir, "vocab.json"),
    )
