"""One-shot export job: run both backends along the forced path.

``export_replay`` loads the acoustic and language checkpoints, verifies
they share one character vocabulary, tokenizes the transcript once, and
scores it under both backends.  It writes three artifacts: an acoustic
replay file, a language replay file (identical forced paths, per the
shared tokenization), and the vocabulary dump that replay consumers use
to check the embedded digest.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .audio import load_wave, window_features
from .charset import Charset
from .checkpoints import load_checkpoint
from .errors import CheckpointError, ExportError, TokenizerMismatch
from .mgfr import write_replay_file
from .scoring import HIDDEN_SOURCE, score_acoustic, score_language


@dataclass(frozen=True)
class ExportJob:
    """Inputs and output paths for one utterance export."""

    acoustic_checkpoint: str
    language_checkpoint: str
    audio_path: str
    transcript: str
    prompt: str
    acoustic_out: str
    language_out: str
    vocab_out: str


@dataclass(frozen=True)
class ExportResult:
    """What was written, for logging and interop checks."""

    forced_path: tuple[int, ...]
    vocab_digest: str
    vocab_size: int
    acoustic_hidden_dim: int
    language_hidden_dim: int
    acoustic_losses: np.ndarray  # (T,) float32
    language_losses: np.ndarray  # (T,) float32


def _meta(spec, trace_kind: str) -> dict:
    return {
        "generator": "export-bridge",
        "architecture": "gpt2",
        "kind": trace_kind,
        "decoder_layers": spec.n_layer,
        "hidden_source": HIDDEN_SOURCE,
        "checkpoint_seed": spec.seed,
    }


def export_replay(job: ExportJob) -> ExportResult:
    """Run one export job; returns a summary of the written artifacts."""
    acoustic_spec, acoustic_model = load_checkpoint(job.acoustic_checkpoint)
    language_spec, language_model = load_checkpoint(job.language_checkpoint)
    if acoustic_spec.kind != "acoustic":
        raise CheckpointError(
            f"{job.acoustic_checkpoint!r} holds a {acoustic_spec.kind} checkpoint, expected acoustic"
        )
    if language_spec.kind != "language":
        raise CheckpointError(
            f"{job.language_checkpoint!r} holds a {language_spec.kind} checkpoint, expected language"
        )
    if acoustic_spec.chars != language_spec.chars:
        raise TokenizerMismatch(
            "checkpoint vocabularies differ: acoustic has "
            f"{len(acoustic_spec.chars)} characters, language has {len(language_spec.chars)}"
        )
    charset = Charset(acoustic_spec.chars)
    path = charset.tokenize(job.transcript)
    if not path:
        raise ExportError("transcript is empty, nothing to export")
    prompt_ids = charset.tokenize(job.prompt)

    samples = load_wave(job.audio_path)
    features = window_features(samples, acoustic_spec.audio_windows)
    acoustic_trace = score_acoustic(acoustic_model, acoustic_spec, features, path)
    language_trace = score_language(language_model, language_spec, prompt_ids, path)

    digest = charset.digest()
    write_replay_file(
        job.acoustic_out,
        kind="acoustic",
        vocab_digest=digest,
        forced_path=path,
        logits=acoustic_trace.logits,
        hidden=acoustic_trace.hidden,
        meta=_meta(acoustic_spec, "acoustic"),
    )
    write_replay_file(
        job.language_out,
        kind="language",
        vocab_digest=digest,
        forced_path=path,
        logits=language_trace.logits,
        hidden=language_trace.hidden,
        meta=_meta(language_spec, "language"),
    )
    with open(job.vocab_out, "w", encoding="utf-8") as fh:
        fh.write(charset.vocab_json())
        fh.write("\n")

    return ExportResult(
        forced_path=path,
        vocab_digest=digest,
        vocab_size=charset.vocab_size,
        acoustic_hidden_dim=acoustic_trace.hidden.shape[1],
        language_hidden_dim=language_trace.hidden.shape[1],
        acoustic_losses=acoustic_trace.losses,
        language_losses=language_trace.losses,
    )
