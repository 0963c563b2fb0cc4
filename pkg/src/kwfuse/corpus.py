"""Utterance manifests.

A manifest is JSON Lines: one object per utterance with fields ``id``,
``audio_replay`` (path or ``synthetic:<seed>``), ``lm_replay`` (same),
optional ``reference`` text, and an optional per-utterance ``keywords``
file override.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import KwfuseError


@dataclass(frozen=True)
class Utterance:
    id: str
    audio_binding: str
    lm_binding: str
    reference: str | None = None
    keywords_path: str | None = None


def parse_binding(binding: str) -> tuple[str, int | str]:
    """Split a scorer binding into ("synthetic", seed) or ("replay", path)."""
    if binding.startswith("synthetic:"):
        seed_text = binding[len("synthetic:") :]
        try:
            return "synthetic", int(seed_text)
        except ValueError:
            raise KwfuseError(f"bad synthetic seed {seed_text!r}") from None
    return "replay", binding


def load_manifest(path: str) -> list[Utterance]:
    utterances: list[Utterance] = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise KwfuseError(f"{path}:{lineno}: not valid JSON: {exc}") from exc
            try:
                utt = Utterance(
                    id=str(obj["id"]),
                    audio_binding=str(obj["audio_replay"]),
                    lm_binding=str(obj["lm_replay"]),
                    reference=obj.get("reference"),
                    keywords_path=obj.get("keywords"),
                )
            except KeyError as exc:
                raise KwfuseError(f"{path}:{lineno}: missing manifest field {exc}") from exc
            if utt.id in seen:
                raise KwfuseError(f"{path}:{lineno}: duplicate utterance id {utt.id!r}")
            seen.add(utt.id)
            utterances.append(utt)
    return utterances
