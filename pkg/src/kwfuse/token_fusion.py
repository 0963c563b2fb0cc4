"""Entropy-gated late fusion of acoustic and language logits.

The acoustic scorer's own uncertainty decides how much the language
scorer is trusted: the gate is the sigmoid of the Shannon entropy (nats)
of the acoustic next-token distribution, so a confident acoustic model
(entropy near 0) pins the gate at 1/2 while a flat one pushes it toward
sigmoid(ln V).  Fused logits are ``s_a + gate * s_l``; the token
distribution is their softmax.  All arithmetic is f64.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import LengthMismatch, NonFiniteInput, NotADistribution, TokenOutOfRange

DIST_ATOL = 1e-6


@dataclass(frozen=True)
class FusedTokenStep:
    """Fused logits, the uncertainty gate, and the token distribution."""

    fused_logits: np.ndarray
    gate: float
    token_probs: np.ndarray


def softmax(logits: np.ndarray) -> np.ndarray:
    """Max-shifted softmax in f64."""
    shifted = np.asarray(logits, dtype=np.float64)
    shifted = shifted - shifted.max()
    exps = np.exp(shifted)
    return exps / exps.sum()


def sigmoid(x: float) -> float:
    """Logistic function; stable for the non-negative inputs used here."""
    if x >= 0:
        return 1.0 / (1.0 + np.exp(-x))
    z = np.exp(x)
    return float(z / (1.0 + z))


def check_distribution(probs: np.ndarray, atol: float = DIST_ATOL) -> np.ndarray:
    probs = np.asarray(probs, dtype=np.float64)
    if probs.ndim != 1 or probs.size == 0:
        raise NotADistribution("expected a non-empty 1-d probability vector")
    if not np.isfinite(probs).all() or (probs < 0).any():
        raise NotADistribution("entries must be finite and non-negative")
    total = probs.sum()
    if abs(total - 1.0) > atol:
        raise NotADistribution(f"entries sum to {total}, not 1 within {atol}")
    return probs


def entropy(probs: np.ndarray) -> float:
    """Shannon entropy in nats, with 0 * ln 0 taken as 0."""
    probs = check_distribution(probs)
    nonzero = probs[probs > 0.0]
    return float(-(nonzero * np.log(nonzero)).sum())


def uncertainty_gate(probs: np.ndarray) -> float:
    """sigmoid(entropy(probs)): 0.5 at a point mass, sigmoid(ln V) at uniform."""
    return sigmoid(entropy(probs))


def fuse_logits(acoustic_logits: np.ndarray, language_logits: np.ndarray) -> FusedTokenStep:
    """Gate the language logits by acoustic uncertainty and renormalize."""
    s_a = np.asarray(acoustic_logits, dtype=np.float64)
    s_l = np.asarray(language_logits, dtype=np.float64)
    if s_a.shape != s_l.shape or s_a.ndim != 1:
        raise LengthMismatch(f"logit vectors disagree: {s_a.shape} vs {s_l.shape}")
    if not (np.isfinite(s_a).all() and np.isfinite(s_l).all()):
        raise NonFiniteInput("logits must be finite")
    gate = uncertainty_gate(softmax(s_a))
    fused = s_a + gate * s_l
    return FusedTokenStep(fused_logits=fused, gate=gate, token_probs=softmax(fused))


def token_prob_of(step: FusedTokenStep, token: int) -> float:
    if not 0 <= token < step.token_probs.shape[0]:
        raise TokenOutOfRange(f"token {token} outside [0, {step.token_probs.shape[0]})")
    return float(step.token_probs[token])
