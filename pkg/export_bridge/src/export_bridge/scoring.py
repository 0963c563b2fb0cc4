"""Teacher-forced scoring along a fixed transcript path.

Each backend runs one causal forward pass over ``[prefix, y_0 .. y_(T-2)]``;
the logits row that predicts ``y_t`` sits at position ``len(prefix) - 1 + t``,
so the path itself is scored but the prefix never is.  The prefix is the
tokenized instruction prompt for the language backend (or the
end-of-sequence token when the prompt is empty, so step 0 still has an
input position) and the projected waveform windows for the acoustic
backend.

The captured hidden state is the final decoder layer's output after the
closing layer norm: exactly the vector the output projection reads to
produce the step's logits.  Per-step losses come from the backend's own
cross entropy over the same rows.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import torch
import torch.nn.functional as F

from .checkpoints import CheckpointSpec, ScoringModel
from .errors import ExportError

# Recorded in replay meta: where the hidden state was captured.
HIDDEN_SOURCE = "final decoder layer output after closing layer norm, before output projection"


@dataclass(frozen=True)
class StepTrace:
    """Per-step outputs along the forced path."""

    logits: np.ndarray  # (T, V) float32
    hidden: np.ndarray  # (T, d) float32
    losses: np.ndarray  # (T,) float32, backend cross entropy per step


def _forced_trace(model: ScoringModel, spec: CheckpointSpec, prefix_embeds, path) -> StepTrace:
    if not path:
        raise ExportError("forced path must hold at least one token")
    n_prefix = prefix_embeds.shape[0]
    total = n_prefix + len(path) - 1
    if total > spec.n_positions:
        raise ExportError(
            f"prefix plus path needs {total} positions, checkpoint allows {spec.n_positions}"
        )
    embedding = model.decoder.transformer.wte
    with torch.no_grad():
        if len(path) > 1:
            shifted = torch.tensor(path[:-1], dtype=torch.long)
            inputs = torch.cat([prefix_embeds, embedding(shifted)], dim=0)
        else:
            inputs = prefix_embeds
        out = model.decoder(inputs_embeds=inputs[None, :, :], output_hidden_states=True)
        rows = slice(n_prefix - 1, n_prefix - 1 + len(path))
        logits = out.logits[0, rows, :]
        hidden = out.hidden_states[-1][0, rows, :]
        targets = torch.tensor(path, dtype=torch.long)
        losses = F.cross_entropy(logits, targets, reduction="none")
    return StepTrace(
        logits=logits.numpy().astype(np.float32, copy=True),
        hidden=hidden.numpy().astype(np.float32, copy=True),
        losses=losses.numpy().astype(np.float32, copy=True),
    )


def score_language(
    model: ScoringModel, spec: CheckpointSpec, prompt_ids, path
) -> StepTrace:
    """Score the path conditioned on the tokenized prompt."""
    prefix_ids = tuple(prompt_ids) or (spec.charset.eos_id,)
    with torch.no_grad():
        prefix_embeds = model.decoder.transformer.wte(
            torch.tensor(prefix_ids, dtype=torch.long)
        )
    return _forced_trace(model, spec, prefix_embeds, tuple(path))


def score_acoustic(
    model: ScoringModel, spec: CheckpointSpec, features, path
) -> StepTrace:
    """Score the path conditioned on projected waveform windows."""
    feats = np.asarray(features, dtype=np.float32)
    if feats.ndim != 2 or feats.shape[0] != spec.audio_windows:
        raise ExportError(
            f"expected {spec.audio_windows} feature windows, got shape {feats.shape}"
        )
    with torch.no_grad():
        prefix_embeds = model.audio_proj(torch.from_numpy(feats))
    return _forced_trace(model, spec, prefix_embeds, tuple(path))
