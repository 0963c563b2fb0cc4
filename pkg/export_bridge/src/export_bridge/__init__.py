"""Forced-path exporter for tiny decoder-only checkpoints.

Runs an acoustic and a language backend along one tokenization of a
transcript and writes per-step logits and hidden states as MGFR v1
replay files, plus the vocabulary dump replay consumers use to verify
the embedded digest.  The package exists to exercise the replay-file
interface end to end with a real model runtime; the tiny checkpoints it
creates are randomly initialized, so the artifacts demonstrate format
interoperability, not transcription accuracy.
"""

from .audio import N_FEATURES, load_wave, window_features
from .charset import DEFAULT_CHARS, EOS_SURFACE, Charset
from .checkpoints import (
    CONFIG_NAME,
    WEIGHTS_NAME,
    CheckpointSpec,
    ScoringModel,
    create_checkpoint,
    load_checkpoint,
)
from .errors import AudioLoadError, CheckpointError, ExportError, TokenizerMismatch
from .export import ExportJob, ExportResult, export_replay
from .mgfr import replay_blob, write_replay_file
from .prompts import PROMPT_TEMPLATE, PROMPT_TEMPLATE_EMPTY, render_prompt
from .scoring import HIDDEN_SOURCE, StepTrace, score_acoustic, score_language

__all__ = [
    "AudioLoadError",
    "CONFIG_NAME",
    "Charset",
    "CheckpointError",
    "CheckpointSpec",
    "DEFAULT_CHARS",
    "EOS_SURFACE",
    "ExportError",
    "ExportJob",
    "ExportResult",
    "HIDDEN_SOURCE",
    "N_FEATURES",
    "PROMPT_TEMPLATE",
    "PROMPT_TEMPLATE_EMPTY",
    "ScoringModel",
    "StepTrace",
    "TokenizerMismatch",
    "WEIGHTS_NAME",
    "create_checkpoint",
    "export_replay",
    "load_checkpoint",
    "load_wave",
    "render_prompt",
    "replay_blob",
    "score_acoustic",
    "score_language",
    "window_features",
    "write_replay_file",
]
