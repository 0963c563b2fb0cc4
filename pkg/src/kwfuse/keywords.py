"""Keyword lists and the contextual prompt handed to the language scorer.

Slot 0 of every keyword list is reserved for the "no keyword" outcome:
the phrase distribution over a list of N keywords always has N+1 entries,
with entry 0 carrying the prior of emitting an ordinary token instead of
copying a phrase.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DuplicateKeyword, EmptyKeyword, UnknownCharacter, UntokenizableKeyword
from .vocab import Tokenizer

KEYWORD_PLACEHOLDER = "{keywords}"

PROMPT_TEMPLATE = (
    "Transcribe the speech into text. "
    "The following keywords are likely to appear. "
    "Use relevant keywords to improve transcription accuracy and ignore irrelevant ones. "
    "The keywords are {keywords}. "
    "The text corresponding to the speech is:"
)

# Empty-list variant: the keyword enumeration sentence is dropped entirely.
PROMPT_TEMPLATE_EMPTY = (
    "Transcribe the speech into text. "
    "The following keywords are likely to appear. "
    "Use relevant keywords to improve transcription accuracy and ignore irrelevant ones. "
    "The text corresponding to the speech is:"
)


@dataclass(frozen=True)
class Keyword:
    """A biasing phrase: surface text plus its token-id sequence."""

    surface: str
    token_ids: tuple[int, ...]

    def __post_init__(self):
        if len(self.token_ids) < 1:
            raise EmptyKeyword(f"keyword {self.surface!r} has no tokens")


@dataclass(frozen=True)
class KeywordList:
    """Ordered keyword entries occupying slots 1..N; slot 0 is reserved.

    ``n`` is the number of real keywords; distributions over the list
    have ``n + 1`` entries.  ``keyword(i)`` addresses slots 1..N.
    """

    keywords: tuple[Keyword, ...]

    @property
    def n(self) -> int:
        return len(self.keywords)

    @property
    def slots(self) -> int:
        return len(self.keywords) + 1

    def keyword(self, index: int) -> Keyword:
        """Entry at slot ``index`` in 1..N (slot 0 has no tokens)."""
        if not 1 <= index <= self.n:
            raise IndexError(f"keyword slot {index} outside 1..{self.n}")
        return self.keywords[index - 1]

    def __iter__(self):
        return iter(self.keywords)

    def surfaces(self) -> list[str]:
        return [k.surface for k in self.keywords]


@dataclass(frozen=True)
class ContextPrompt:
    template: str
    rendered: str


def build_keyword_list(surfaces: list[str], tokenizer: Tokenizer) -> KeywordList:
    """Tokenize keyword surfaces into a KeywordList, order preserved.

    Rejects blank surfaces, surfaces outside the vocabulary's coverage,
    and entries whose token-id sequences collide with an earlier entry.
    """
    eos = tokenizer.vocabulary.eos_id
    seen: set[tuple[int, ...]] = set()
    entries: list[Keyword] = []
    for raw in surfaces:
        surface = raw.strip()
        if not surface:
            raise EmptyKeyword(f"blank keyword surface {raw!r}")
        try:
            ids = tuple(tokenizer.tokenize(surface))
        except UnknownCharacter as exc:
            raise UntokenizableKeyword(f"keyword {surface!r}: {exc}") from exc
        if eos in ids:
            raise UntokenizableKeyword(f"keyword {surface!r} tokenizes through eos")
        if ids in seen:
            raise DuplicateKeyword(f"keyword {surface!r} duplicates an earlier token sequence")
        seen.add(ids)
        entries.append(Keyword(surface, ids))
    return KeywordList(tuple(entries))


def render_prompt(keyword_list: KeywordList) -> ContextPrompt:
    """Render the instruction prompt enumerating the keywords in order.

    Keywords are comma-joined into the enumeration sentence; an empty
    list drops that sentence and keeps the rest of the instruction.
    """
    if keyword_list.n == 0:
        return ContextPrompt(PROMPT_TEMPLATE_EMPTY, PROMPT_TEMPLATE_EMPTY)
    joined = ", ".join(keyword_list.surfaces())
    return ContextPrompt(PROMPT_TEMPLATE, PROMPT_TEMPLATE.replace(KEYWORD_PLACEHOLDER, joined))


def load_keyword_file(path: str) -> list[str]:
    """Read one keyword per line; blank lines and ``#`` comments ignored."""
    surfaces = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            surfaces.append(stripped)
    return surfaces
