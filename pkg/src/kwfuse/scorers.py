"""Step scorers: the uniform per-token scoring contract.

A scorer session produces, for the next position after its consumed
prefix, a logits vector over the vocabulary and a hidden-state vector.
Two implementations exist: a synthetic scorer (pure deterministic hash
of seed and prefix, for desk-scale runs and CI) and a replay scorer that
serves tensors recorded from a real model along one forced path.

Sessions are stateful and single-owner; ``fork()`` makes an independent
copy so beam search can branch.  Scores are returned as f64 regardless
of storage precision.
"""

from __future__ import annotations

import hashlib

import numpy as np

from .errors import BadDims, ReplayExhausted, ReplayPathDiverged, TokenOutOfRange
from .replay import ReplayFile, read_replay
from .vocab import Vocabulary


class StepScores:
    """One decoding step's logits (length V) and hidden state (length d)."""

    __slots__ = ("logits", "hidden")

    def __init__(self, logits: np.ndarray, hidden: np.ndarray):
        self.logits = logits
        self.hidden = hidden


class ScorerSession:
    """Common session state: consumed prefix plus declared dimensions."""

    kind: str

    def __init__(self, vocab_size: int, hidden_dim: int, kind: str):
        self.vocab_size = vocab_size
        self.hidden_dim = hidden_dim
        self.kind = kind
        self._prefix: list[int] = []

    @property
    def consumed_prefix(self) -> tuple[int, ...]:
        return tuple(self._prefix)

    def advance(self, token: int) -> None:
        """Teacher-force one token into the conditioning prefix."""
        if not 0 <= token < self.vocab_size:
            raise TokenOutOfRange(f"token {token} outside [0, {self.vocab_size})")
        self._prefix.append(token)

    def step(self) -> StepScores:
        raise NotImplementedError

    def fork(self) -> "ScorerSession":
        raise NotImplementedError


# Counter-mode SplitMix64: disperses a hash key into n floats in [0, 1).
_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_U64 = 0xFFFFFFFFFFFFFFFF


def _unit_floats(key: int, n: int) -> np.ndarray:
    z = np.uint64(key & _U64) + np.arange(1, n + 1, dtype=np.uint64) * _GOLDEN
    z ^= z >> np.uint64(30)
    z *= _MIX1
    z ^= z >> np.uint64(27)
    z *= _MIX2
    z ^= z >> np.uint64(31)
    return (z >> np.uint64(11)).astype(np.float64) * 2.0**-53


class SyntheticSession(ScorerSession):
    """Deterministic stand-in scorer.

    Scores are a pure function of (seed, kind, consumed prefix): logits
    lie in [-10, 10), hiddens in [-1, 1).  Two sessions with equal
    construction arguments produce bitwise-identical scores forever.
    """

    def __init__(self, seed: int, vocab_size: int, hidden_dim: int, kind: str = "acoustic"):
        if vocab_size < 2 or hidden_dim < 1:
            raise BadDims(f"need V >= 2 and d >= 1, got ({vocab_size}, {hidden_dim})")
        super().__init__(vocab_size, hidden_dim, kind)
        self.seed = seed

    def _key(self) -> int:
        h = hashlib.blake2b(digest_size=8)
        h.update(self.seed.to_bytes(8, "little", signed=True))
        h.update(self.kind.encode("ascii"))
        for t in self._prefix:
            h.update(t.to_bytes(4, "little"))
        return int.from_bytes(h.digest(), "little")

    def step(self) -> StepScores:
        v, d = self.vocab_size, self.hidden_dim
        u = _unit_floats(self._key(), v + d)
        return StepScores(logits=u[:v] * 20.0 - 10.0, hidden=u[v:] * 2.0 - 1.0)

    def fork(self) -> "SyntheticSession":
        clone = SyntheticSession(self.seed, self.vocab_size, self.hidden_dim, self.kind)
        clone._prefix = list(self._prefix)
        return clone


class ReplaySession(ScorerSession):
    """Serves recorded tensors as long as the prefix follows the file's path."""

    def __init__(self, replay: ReplayFile):
        super().__init__(replay.vocab_size, replay.hidden_dim, replay.kind)
        self.replay = replay

    def step(self) -> StepScores:
        t = len(self._prefix)
        forced = self.replay.forced_path
        if tuple(self._prefix) != forced[:t]:
            raise ReplayPathDiverged(f"prefix {self._prefix} left recorded path {list(forced[:t])}")
        if t >= self.replay.steps:
            raise ReplayExhausted(f"step {t} past recorded T={self.replay.steps}")
        return StepScores(
            logits=self.replay.logits[t].astype(np.float64),
            hidden=self.replay.hidden[t].astype(np.float64),
        )

    def fork(self) -> "ReplaySession":
        clone = ReplaySession(self.replay)
        clone._prefix = list(self._prefix)
        return clone


def open_synthetic(seed: int, dims: tuple[int, int], kind: str = "acoustic") -> SyntheticSession:
    """Session whose scores derive deterministically from ``seed``."""
    vocab_size, hidden_dim = dims
    return SyntheticSession(seed, vocab_size, hidden_dim, kind)


def open_replay(path: str, vocabulary: Vocabulary | None = None) -> ReplaySession:
    """Open a recorded trace, positioned at step 0."""
    return ReplaySession(read_replay(path, vocabulary))
