"""Recorded scorer traces ("MGFR" files).

A replay file stores, for one utterance and one scorer, the per-step
logits and hidden states along a single forced token path.  Header JSON
fields: ``vocab_digest``, ``V``, ``d``, ``T``, ``forced_path`` (list of
T token ids), ``kind`` ("acoustic" or "language").  Writers may add a
free-form ``meta`` field (e.g. which decoder layer the hidden state was
captured from); readers preserve unknown fields.

The body is T records, each V f32 logits followed by d f32 hiddens,
little-endian, no padding.  Arrays are kept in f32 so a read/write
round trip is bit-exact; consumers upcast to f64 for arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import binio
from .errors import BadDims, TruncatedBody, VocabularyMismatch
from .vocab import Vocabulary

MAGIC = b"MGFR"

KINDS = ("acoustic", "language")


@dataclass(frozen=True)
class ReplayFile:
    """In-memory image of one replay file."""

    vocab_digest: str
    kind: str
    forced_path: tuple[int, ...]
    logits: np.ndarray  # (T, V) f32
    hidden: np.ndarray  # (T, d) f32
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise BadDims(f"kind must be one of {KINDS}, got {self.kind!r}")
        if self.logits.ndim != 2 or self.hidden.ndim != 2:
            raise BadDims("logits and hidden must be 2-d (T, V) / (T, d)")
        if self.logits.shape[0] != self.hidden.shape[0]:
            raise BadDims("logits and hidden disagree on step count")
        if len(self.forced_path) != self.logits.shape[0]:
            raise BadDims("forced path length must equal step count")
        if self.vocab_size < 2 or self.hidden_dim < 1:
            raise BadDims(f"need V >= 2 and d >= 1, got ({self.vocab_size}, {self.hidden_dim})")
        for t in self.forced_path:
            if not 0 <= t < self.vocab_size:
                raise BadDims(f"forced-path token {t} outside [0, {self.vocab_size})")

    @property
    def steps(self) -> int:
        return self.logits.shape[0]

    @property
    def vocab_size(self) -> int:
        return self.logits.shape[1]

    @property
    def hidden_dim(self) -> int:
        return self.hidden.shape[1]


def write_replay(path: str, replay: ReplayFile) -> None:
    header = {
        "vocab_digest": replay.vocab_digest,
        "V": replay.vocab_size,
        "d": replay.hidden_dim,
        "T": replay.steps,
        "forced_path": list(replay.forced_path),
        "kind": replay.kind,
    }
    if replay.meta:
        header["meta"] = replay.meta
    chunks = [binio.pack_header(MAGIC, header)]
    for t in range(replay.steps):
        chunks.append(binio.f32_bytes(replay.logits[t]))
        chunks.append(binio.f32_bytes(replay.hidden[t]))
    with open(path, "wb") as fh:
        fh.write(b"".join(chunks))


def read_replay(path: str, vocabulary: Vocabulary | None = None) -> ReplayFile:
    """Parse a replay file; with ``vocabulary`` given, enforce its digest."""
    with open(path, "rb") as fh:
        data = fh.read()
    header, payload = binio.split_envelope(data, MAGIC)
    try:
        v, d, t = int(header["V"]), int(header["d"]), int(header["T"])
        digest = str(header["vocab_digest"])
        kind = str(header["kind"])
        forced = tuple(int(x) for x in header["forced_path"])
    except (KeyError, TypeError, ValueError) as exc:
        raise BadDims(f"{path}: malformed replay header: {exc}") from exc
    if vocabulary is not None:
        if v != vocabulary.size:
            raise VocabularyMismatch(f"{path}: header V={v}, vocabulary has {vocabulary.size}")
        if digest != vocabulary.digest():
            raise VocabularyMismatch(f"{path}: vocabulary digest mismatch")
    record = 4 * (v + d)
    if len(payload) < record * t:
        raise TruncatedBody(f"{path}: body holds {len(payload)} bytes, header declares {record * t}")
    logits = np.empty((t, v), dtype="<f4")
    hidden = np.empty((t, d), dtype="<f4")
    offset = 0
    for step in range(t):
        logits[step], offset = binio.take_f32(payload, offset, v, "logits")
        hidden[step], offset = binio.take_f32(payload, offset, d, "hidden")
    return ReplayFile(
        vocab_digest=digest,
        kind=kind,
        forced_path=forced,
        logits=logits,
        hidden=hidden,
        meta=dict(header.get("meta") or {}),
    )
