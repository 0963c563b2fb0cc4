"""Character vocabulary shared by a checkpoint pair.

A checkpoint stores its vocabulary as a string of unique characters in
``config.json``; token ids follow string order and the end-of-sequence
token always takes the last id.  Replay consumers identify a vocabulary
by two artifacts this module produces:

* the vocabulary dump, a JSON object ``{"eos_id": ..., "tokens": [...]}``
* the digest, the sha256 hex of that object serialized compactly with
  sorted keys (UTF-8, non-ASCII characters unescaped)

Replay files embed the digest in their header, so an exporter and the
engine that replays its files must agree on this recipe byte for byte.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

from .errors import ExportError

EOS_SURFACE = "<eos>"

# Covers the instruction-prompt template (capitals, comma, period, colon)
# plus lowercase transcripts with digits, apostrophes, and hyphens.
DEFAULT_CHARS = (
    " ',-.:"
    "0123456789"
    "ABCDEFGHIJKLMNOPQRSTUVWXYZ"
    "abcdefghijklmnopqrstuvwxyz"
)


@dataclass(frozen=True)
class Charset:
    """Character inventory; ids follow ``chars`` order, end-of-sequence last."""

    chars: str

    def __post_init__(self) -> None:
        if not self.chars:
            raise ExportError("charset must contain at least one character")
        if len(set(self.chars)) != len(self.chars):
            raise ExportError("charset contains duplicate characters")

    @property
    def vocab_size(self) -> int:
        return len(self.chars) + 1

    @property
    def eos_id(self) -> int:
        return len(self.chars)

    @property
    def tokens(self) -> list[str]:
        return list(self.chars) + [EOS_SURFACE]

    def tokenize(self, text: str) -> tuple[int, ...]:
        """Map text to token ids, one per character."""
        ids = []
        for position, char in enumerate(text):
            token_id = self.chars.find(char)
            if token_id < 0:
                raise ExportError(
                    f"character {char!r} at position {position} is not in the checkpoint vocabulary"
                )
            ids.append(token_id)
        return tuple(ids)

    def vocab_json(self) -> str:
        """The vocabulary dump consumed by replay readers."""
        return json.dumps(
            {"eos_id": self.eos_id, "tokens": self.tokens}, ensure_ascii=False
        )

    def digest(self) -> str:
        """sha256 identity of the vocabulary, as replay headers expect."""
        blob = json.dumps(
            {"eos_id": self.eos_id, "tokens": self.tokens},
            sort_keys=True,
            ensure_ascii=False,
            separators=(",", ":"),
        )
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()
