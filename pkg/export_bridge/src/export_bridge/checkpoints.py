"""Tiny decoder-only checkpoints used as scoring backends.

A checkpoint is a directory with two files:

  config.json   the ``CheckpointSpec`` fields as a JSON object
  weights.pt    torch state dict for ``ScoringModel``

Both backends share the GPT-2 architecture at desk scale.  The acoustic
backend adds a linear projection that turns fixed-window waveform
statistics into prefix embeddings, so audio enters the decoder the same
way prompt tokens do: as leading positions every transcript token can
attend to.  Weights are randomly initialized from a seed; the exporter
demonstrates format interoperability, not accuracy, so no training loop
lives here.
"""

from __future__ import annotations

import json
import os
import pickle
import zipfile
from dataclasses import asdict, dataclass, fields

import torch
from torch import nn
from transformers import GPT2Config, GPT2LMHeadModel

from .audio import N_FEATURES
from .charset import Charset
from .errors import CheckpointError

CONFIG_NAME = "config.json"
WEIGHTS_NAME = "weights.pt"
KINDS = ("acoustic", "language")


@dataclass(frozen=True)
class CheckpointSpec:
    """Architecture and vocabulary of one checkpoint."""

    kind: str
    chars: str
    n_embd: int = 32
    n_layer: int = 2
    n_head: int = 2
    n_positions: int = 256
    audio_windows: int = 4
    seed: int = 0

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise CheckpointError(f"kind must be one of {KINDS}, got {self.kind!r}")
        Charset(self.chars)  # validates non-empty and duplicate-free
        if self.n_embd < 1 or self.n_layer < 1 or self.n_head < 1:
            raise CheckpointError("n_embd, n_layer, and n_head must be positive")
        if self.n_embd % self.n_head != 0:
            raise CheckpointError(
                f"n_embd ({self.n_embd}) must be divisible by n_head ({self.n_head})"
            )
        if self.n_positions < 2:
            raise CheckpointError(f"n_positions must be >= 2, got {self.n_positions}")
        if self.audio_windows < 1:
            raise CheckpointError(f"audio_windows must be >= 1, got {self.audio_windows}")

    @property
    def charset(self) -> Charset:
        return Charset(self.chars)

    @property
    def vocab_size(self) -> int:
        return len(self.chars) + 1


class ScoringModel(nn.Module):
    """GPT-2 decoder, plus an audio-feature projection for acoustic checkpoints."""

    def __init__(self, spec: CheckpointSpec):
        super().__init__()
        charset = spec.charset
        config = GPT2Config(
            vocab_size=charset.vocab_size,
            n_positions=spec.n_positions,
            n_embd=spec.n_embd,
            n_layer=spec.n_layer,
            n_head=spec.n_head,
            bos_token_id=charset.eos_id,
            eos_token_id=charset.eos_id,
        )
        self.decoder = GPT2LMHeadModel(config)
        if spec.kind == "acoustic":
            self.audio_proj = nn.Linear(N_FEATURES, spec.n_embd)


def create_checkpoint(directory: str, spec: CheckpointSpec) -> None:
    """Initialize a checkpoint from the spec's seed and write it to disk."""
    os.makedirs(directory, exist_ok=True)
    torch.manual_seed(spec.seed)
    model = ScoringModel(spec)
    config_path = os.path.join(directory, CONFIG_NAME)
    with open(config_path, "w", encoding="utf-8") as fh:
        json.dump(asdict(spec), fh, sort_keys=True, indent=2)
        fh.write("\n")
    torch.save(model.state_dict(), os.path.join(directory, WEIGHTS_NAME))


def load_checkpoint(directory: str) -> tuple[CheckpointSpec, ScoringModel]:
    """Read a checkpoint directory; the model comes back in eval mode."""
    config_path = os.path.join(directory, CONFIG_NAME)
    try:
        with open(config_path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise CheckpointError(f"cannot read checkpoint config {config_path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise CheckpointError(f"{config_path!r} is not valid JSON: {exc}") from exc
    expected = {f.name for f in fields(CheckpointSpec)}
    if not isinstance(raw, dict) or set(raw) != expected:
        raise CheckpointError(
            f"{config_path!r} must hold exactly the fields {sorted(expected)}"
        )
    try:
        spec = CheckpointSpec(**raw)
    except TypeError as exc:
        raise CheckpointError(f"{config_path!r}: {exc}") from exc
    weights_path = os.path.join(directory, WEIGHTS_NAME)
    try:
        state = torch.load(weights_path, map_location="cpu", weights_only=True)
    except (OSError, EOFError, RuntimeError, ValueError, pickle.UnpicklingError, zipfile.BadZipFile) as exc:
        raise CheckpointError(f"cannot load weights {weights_path!r}: {exc}") from exc
    model = ScoringModel(spec)
    try:
        model.load_state_dict(state, strict=True)
    except RuntimeError as exc:
        raise CheckpointError(
            f"{weights_path!r} does not match the architecture in {config_path!r}: {exc}"
        ) from exc
    model.eval()
    return spec, model
