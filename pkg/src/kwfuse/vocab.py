"""Token vocabulary and the built-in greedy tokenizer.

The engine is model-agnostic: a vocabulary is just an ordered list of
token strings plus a reserved end-of-sequence id.  Desk-scale runs build
a character vocabulary from the corpus; real subword vocabularies are
imported from dump files written by an exporter and are never computed
here.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

from .errors import TokenOutOfRange, UnknownCharacter

EOS_SURFACE = "<eos>"


@dataclass(frozen=True)
class Vocabulary:
    """Dense bijection between token strings and ids in [0, V).

    ``eos_id`` is a member of the id range; by convention the built-in
    character vocabulary places it last.
    """

    id_to_string: tuple[str, ...]
    eos_id: int
    string_to_id: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        inverse = {s: i for i, s in enumerate(self.id_to_string)}
        if len(inverse) != len(self.id_to_string):
            raise ValueError("token strings must be unique")
        if not 0 <= self.eos_id < len(self.id_to_string):
            raise ValueError("eos_id outside vocabulary")
        object.__setattr__(self, "string_to_id", inverse)

    @property
    def size(self) -> int:
        return len(self.id_to_string)

    def __len__(self) -> int:
        return self.size

    def check_token(self, token: int) -> None:
        if not 0 <= token < self.size:
            raise TokenOutOfRange(f"token {token} outside [0, {self.size})")

    def digest(self) -> str:
        """Stable identity of this vocabulary, used by replay headers.

        sha256 hex of the compact UTF-8 JSON object
        ``{"eos_id": <int>, "tokens": [<str>, ...]}`` with sorted keys.
        Exporters that produce replay files must compute the same value.
        """
        blob = json.dumps(
            {"eos_id": self.eos_id, "tokens": list(self.id_to_string)},
            sort_keys=True,
            ensure_ascii=False,
            separators=(",", ":"),
        )
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()

    def to_json(self) -> str:
        return json.dumps(
            {"eos_id": self.eos_id, "tokens": list(self.id_to_string)},
            ensure_ascii=False,
        )

    @classmethod
    def from_json(cls, text: str) -> "Vocabulary":
        obj = json.loads(text)
        return cls(tuple(obj["tokens"]), int(obj["eos_id"]))


def build_char_vocabulary(corpus: str) -> Vocabulary:
    """Character vocabulary over ``corpus``: sorted unique chars, eos last."""
    chars = sorted(set(corpus))
    return Vocabulary(tuple(chars) + (EOS_SURFACE,), eos_id=len(chars))


class Tokenizer:
    """Greedy longest-match tokenizer over a vocabulary's surfaces.

    For a character vocabulary this is plain per-character lookup; for an
    imported subword vocabulary it is maximal munch.  Detokenization is
    concatenation, so ``detokenize(tokenize(t)) == t`` whenever
    tokenization succeeds.
    """

    def __init__(self, vocabulary: Vocabulary):
        self.vocabulary = vocabulary
        surfaces = [s for i, s in enumerate(vocabulary.id_to_string) if i != vocabulary.eos_id]
        self._max_len = max((len(s) for s in surfaces), default=1)

    def tokenize(self, text: str) -> list[int]:
        ids: list[int] = []
        lookup = self.vocabulary.string_to_id
        eos = self.vocabulary.eos_id
        pos = 0
        while pos < len(text):
            for span in range(min(self._max_len, len(text) - pos), 0, -1):
                tok = lookup.get(text[pos : pos + span])
                if tok is not None and tok != eos:
                    ids.append(tok)
                    pos += span
                    break
            else:
                raise UnknownCharacter(f"no vocabulary entry covers {text[pos]!r} at position {pos}")
        return ids

    def detokenize(self, token_ids: list[int] | tuple[int, ...]) -> str:
        strings = self.vocabulary.id_to_string
        for t in token_ids:
            self.vocabulary.check_token(t)
        return "".join(strings[t] for t in token_ids)
