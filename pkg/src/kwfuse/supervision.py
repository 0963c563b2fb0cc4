"""Phrase-label generation and the two loss terms, as pure functions.

Labels: maximal munch over the reference token ids places each matched
keyword's slot index at the span's first position; positions strictly
inside a span are masked out, because decoding emits a copied keyword in
one step and never predicts from the interior states.  Everything else
is labeled slot 0 ("emit an ordinary token") with the mask on.

Losses follow the negative log-likelihood reading: token loss sums
-ln p_tok(y_t) over the reference, phrase loss sums -ln p_phr(label_t)
over unmasked positions.  The fused-logit gradient of the per-step token
term is softmax(s) - onehot(target), validated here by a central
finite-difference harness.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import LengthMismatch, TokenOutOfRange, ZeroTargetProbability
from .keywords import KeywordList
from .matching import longest_match_spans
from .token_fusion import softmax


@dataclass(frozen=True)
class PhraseLabels:
    """Per-position phrase targets over slots {0..N} plus a loss mask.

    ``labels[t]`` is a keyword slot (1-based) at a span start, else 0;
    ``mask[t]`` is True where the phrase loss applies.
    """

    labels: tuple[int, ...]
    mask: tuple[bool, ...]

    def __post_init__(self):
        if len(self.labels) != len(self.mask):
            raise LengthMismatch("labels and mask lengths differ")


@dataclass(frozen=True)
class LossReport:
    loss_tok: float
    loss_phr: float

    @property
    def total(self) -> float:
        return self.loss_tok + self.loss_phr


def max_match_labels(reference_tokens, keyword_list: KeywordList) -> PhraseLabels:
    """Greedy left-to-right longest-match labeling of keyword spans."""
    tokens = tuple(reference_tokens)
    labels = [0] * len(tokens)
    mask = [True] * len(tokens)
    patterns = [k.token_ids for k in keyword_list]
    for start, length, pattern_index in longest_match_spans(tokens, patterns):
        labels[start] = pattern_index + 1
        for inside in range(start + 1, start + length):
            mask[inside] = False
    return PhraseLabels(tuple(labels), tuple(mask))


def loss_token(per_step_token_probs, reference_tokens) -> float:
    """-sum_t ln p_tok(y_t) over T aligned steps."""
    probs = np.asarray(per_step_token_probs, dtype=np.float64)
    targets = tuple(reference_tokens)
    if probs.ndim != 2 or probs.shape[0] != len(targets):
        raise LengthMismatch(
            f"{probs.shape[0] if probs.ndim == 2 else '?'} probability rows vs {len(targets)} targets"
        )
    total = 0.0
    for t, target in enumerate(targets):
        if not 0 <= target < probs.shape[1]:
            raise TokenOutOfRange(f"target {target} outside [0, {probs.shape[1]}) at step {t}")
        p = probs[t, target]
        if p <= 0.0:
            raise ZeroTargetProbability(f"target token {target} has probability {p} at step {t}")
        total -= float(np.log(p))
    return total


def loss_phrase(per_step_phrase_probs, labels: PhraseLabels) -> float:
    """-sum over unmasked positions of ln p_phr(label); masked rows are ignored."""
    probs = np.asarray(per_step_phrase_probs, dtype=np.float64)
    if probs.ndim != 2 or probs.shape[0] != len(labels.labels):
        raise LengthMismatch(
            f"{probs.shape[0] if probs.ndim == 2 else '?'} probability rows vs {len(labels.labels)} labels"
        )
    total = 0.0
    for t, (label, active) in enumerate(zip(labels.labels, labels.mask)):
        if not active:
            continue
        if not 0 <= label < probs.shape[1]:
            raise TokenOutOfRange(f"label {label} outside [0, {probs.shape[1]}) at step {t}")
        p = probs[t, label]
        if p <= 0.0:
            raise ZeroTargetProbability(f"label {label} has probability {p} at step {t}")
        total -= float(np.log(p))
    return total


def loss_report(per_step_token_probs, reference_tokens, per_step_phrase_probs, labels) -> LossReport:
    return LossReport(
        loss_tok=loss_token(per_step_token_probs, reference_tokens),
        loss_phr=loss_phrase(per_step_phrase_probs, labels),
    )


def grad_fused_logits(fused_logits, target_token: int) -> np.ndarray:
    """Gradient of -ln softmax(fused)[target] w.r.t. the fused logits."""
    logits = np.asarray(fused_logits, dtype=np.float64)
    if not 0 <= target_token < logits.shape[0]:
        raise TokenOutOfRange(f"target {target_token} outside [0, {logits.shape[0]})")
    grad = softmax(logits)
    grad[target_token] -= 1.0
    return grad


def finite_diff_check(
    loss_fn: Callable[[np.ndarray], tuple[float, np.ndarray]],
    point: np.ndarray,
    direction: np.ndarray,
    h: float = 1e-5,
) -> float:
    """Relative error between analytic and central-difference derivatives.

    ``loss_fn(x)`` returns (loss, gradient); the analytic directional
    derivative grad . direction is compared against
    (L(x + h d) - L(x - h d)) / 2h.  A zero direction reports 0.
    """
    if h <= 0:
        raise ValueError("step size h must be positive")
    point = np.asarray(point, dtype=np.float64)
    direction = np.asarray(direction, dtype=np.float64)
    if not direction.any():
        return 0.0
    _, grad = loss_fn(point)
    analytic = float(grad @ direction)
    plus, _ = loss_fn(point + h * direction)
    minus, _ = loss_fn(point - h * direction)
    numeric = (plus - minus) / (2.0 * h)
    return abs(numeric - analytic) / max(abs(numeric), abs(analytic), 1e-12)
