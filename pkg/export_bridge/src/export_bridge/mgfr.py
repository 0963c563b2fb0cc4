"""Writer for MGFR v1 replay files.

One file stores, for one utterance and one scorer, the per-step logits
and hidden states along a single forced token path.  Layout:

  bytes 0..3   magic ``MGFR``
  byte  4      format version (1)
  bytes 5..8   u32 little-endian header length
  header       UTF-8 JSON, compact separators, sorted keys:
               ``{"T", "V", "d", "forced_path", "kind", "vocab_digest"}``
               plus ``"meta"`` when the meta mapping is non-empty
  payload      per step t: V little-endian f32 logits, then d f32 hiddens,
               no padding

Sorted-keys compact JSON makes equal inputs serialize byte-identically,
so a deterministic backend yields byte-identical replay files across
runs.  All arrays are written as f32; readers upcast for arithmetic.
"""

from __future__ import annotations

import json
import struct

import numpy as np

MAGIC = b"MGFR"
VERSION = 1
KINDS = ("acoustic", "language")

_ENVELOPE = struct.Struct("<4sBI")


def replay_blob(
    *,
    kind: str,
    vocab_digest: str,
    forced_path,
    logits,
    hidden,
    meta: dict | None = None,
) -> bytes:
    """Serialize one replay file to bytes, validating the invariants."""
    logits = np.ascontiguousarray(logits, dtype="<f4")
    hidden = np.ascontiguousarray(hidden, dtype="<f4")
    path = tuple(int(t) for t in forced_path)
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}, got {kind!r}")
    if logits.ndim != 2 or hidden.ndim != 2:
        raise ValueError("logits and hidden must be 2-d (T, V) / (T, d)")
    if logits.shape[0] != len(path) or hidden.shape[0] != len(path):
        raise ValueError(
            f"step counts disagree: {len(path)} path tokens, "
            f"{logits.shape[0]} logit rows, {hidden.shape[0]} hidden rows"
        )
    vocab_size, hidden_dim = logits.shape[1], hidden.shape[1]
    if vocab_size < 2 or hidden_dim < 1:
        raise ValueError(f"need V >= 2 and d >= 1, got ({vocab_size}, {hidden_dim})")
    for t in path:
        if not 0 <= t < vocab_size:
            raise ValueError(f"forced-path token {t} outside [0, {vocab_size})")
    if not (np.isfinite(logits).all() and np.isfinite(hidden).all()):
        raise ValueError("logits and hidden must be finite")
    header = {
        "vocab_digest": vocab_digest,
        "V": vocab_size,
        "d": hidden_dim,
        "T": len(path),
        "forced_path": list(path),
        "kind": kind,
    }
    if meta:
        header["meta"] = dict(meta)
    blob = json.dumps(
        header, sort_keys=True, ensure_ascii=False, separators=(",", ":")
    ).encode("utf-8")
    chunks = [_ENVELOPE.pack(MAGIC, VERSION, len(blob)), blob]
    for t in range(len(path)):
        chunks.append(logits[t].tobytes())
        chunks.append(hidden[t].tobytes())
    return b"".join(chunks)


def write_replay_file(path: str, **kwargs) -> None:
    """Write one replay file; keyword arguments as for ``replay_blob``."""
    blob = replay_blob(**kwargs)
    with open(path, "wb") as fh:
        fh.write(blob)
