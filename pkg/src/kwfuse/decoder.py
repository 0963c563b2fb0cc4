"""Joint normalization over vocabulary-plus-keywords and beam search.

One decoding step yields a distribution over a unified outcome space:
every vocabulary token (its fused probability scaled by the slot-0
phrase prior) and every keyword (its phrase probability, consumed as one
atomic outcome no matter how many tokens it expands to).  Beam search
runs directly over this space; after a keyword copy both scorer sessions
are advanced through every copied token before the next step, so
conditioning always reflects the full emitted prefix.

Determinism: candidate pruning breaks score ties by fewer events, then
by the lexicographically smallest per-event key, where a token event
keys as (0, token_id) and a copy event as (1, keyword_slot).  Keys
strictly worsen along a hypothesis lineage, which both makes rankings
reproducible and justifies the early-stop check.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import (
    AlreadyFinished,
    NotADistribution,
    VocabularyMismatch,
    ZeroProbabilityChoice,
)
from .keywords import KeywordList
from .phrase_fusion import EncoderWeights, build_phrase_table, phrase_probs
from .scorers import ScorerSession
from .token_fusion import check_distribution, fuse_logits
from .vocab import Vocabulary

Choice = tuple[str, int]

TOKEN = "token"
COPY = "copy"


@dataclass(frozen=True)
class JointDistribution:
    """Unified step distribution: V token outcomes and N keyword outcomes.

    ``token_part[i]`` is the joint probability of emitting token i;
    ``phrase_part[i-1]`` is the probability of copying keyword slot i.
    The two blocks sum to one.
    """

    token_part: np.ndarray
    phrase_part: np.ndarray

    @property
    def mass(self) -> float:
        return float(self.token_part.sum() + self.phrase_part.sum())


@dataclass(frozen=True)
class Event:
    """One emission: ``index`` is a token id or a keyword slot (1..N)."""

    pos: int
    kind: str
    index: int
    log_prob: float

    def choice_key(self) -> tuple[int, int]:
        return (0 if self.kind == TOKEN else 1, self.index)


@dataclass(frozen=True)
class Hypothesis:
    """A beam entry: emitted tokens, accumulated log-score, event trace."""

    tokens: tuple[int, ...] = ()
    log_score: float = 0.0
    events: tuple[Event, ...] = ()
    finished: bool = False

    def sort_key(self):
        return (-self.log_score, len(self.events), tuple(e.choice_key() for e in self.events))


@dataclass(frozen=True)
class DecodeConfig:
    beam_width: int = 4
    max_len: int = 64
    n_best: int = 1

    def __post_init__(self):
        if self.beam_width < 1:
            raise ValueError("beam_width must be >= 1")
        if self.max_len < 1:
            raise ValueError("max_len must be >= 1")
        if not 1 <= self.n_best <= self.beam_width:
            raise ValueError("need 1 <= n_best <= beam_width")


def joint_step(token_probs: np.ndarray, phrase_probs_vec: np.ndarray) -> JointDistribution:
    """Scale token outcomes by the slot-0 prior; keywords keep their mass."""
    token_probs = check_distribution(token_probs)
    phrase = check_distribution(phrase_probs_vec)
    return JointDistribution(token_part=phrase[0] * token_probs, phrase_part=phrase[1:].copy())


def expand(
    hyp: Hypothesis,
    choice: Choice,
    dist: JointDistribution,
    keywords: KeywordList,
    eos_id: int,
) -> Hypothesis:
    """Apply one outcome: append a token, or a whole keyword atomically.

    A copy charges a single log-probability term regardless of the
    keyword's token length; that is what separates phrase-level from
    token-level scoring.
    """
    if hyp.finished:
        raise AlreadyFinished("cannot expand past eos")
    kind, index = choice
    pos = len(hyp.tokens)
    if kind == TOKEN:
        prob = float(dist.token_part[index])
        if prob <= 0.0:
            raise ZeroProbabilityChoice(f"token {index} has joint probability {prob}")
        emitted: tuple[int, ...] = (index,)
        finished = index == eos_id
    elif kind == COPY:
        prob = float(dist.phrase_part[index - 1])
        if prob <= 0.0:
            raise ZeroProbabilityChoice(f"keyword slot {index} has probability {prob}")
        emitted = keywords.keyword(index).token_ids
        finished = False
    else:
        raise ValueError(f"unknown choice kind {kind!r}")
    log_prob = float(np.log(prob))
    event = Event(pos=pos, kind=kind, index=index, log_prob=log_prob)
    return Hypothesis(
        tokens=hyp.tokens + emitted,
        log_score=hyp.log_score + log_prob,
        events=hyp.events + (event,),
        finished=finished,
    )


class _StepCache:
    """One fused/phrase/joint evaluation per unique token prefix.

    Hypotheses that reach the same emitted prefix condition the scorers
    identically, so their step distributions coincide; computing each
    prefix once is exact, not an approximation.
    """

    def __init__(self, acoustic_factory, language_factory, weights, table, keywords):
        self._acoustic_factory = acoustic_factory
        self._language_factory = language_factory
        self._weights = weights
        self._table = table
        self._keywords = keywords
        self._cache: dict[tuple[int, ...], tuple[JointDistribution, np.ndarray, np.ndarray]] = {}

    def _session(self, factory, prefix):
        session = factory()
        for token in prefix:
            session.advance(token)
        return session

    def joint(self, prefix: tuple[int, ...]):
        hit = self._cache.get(prefix)
        if hit is not None:
            return hit
        acoustic = self._session(self._acoustic_factory, prefix).step()
        language = self._session(self._language_factory, prefix).step()
        fused = fuse_logits(acoustic.logits, language.logits)
        phrase = phrase_probs(self._weights, language.hidden, acoustic.hidden, self._table)
        dist = joint_step(fused.token_probs, phrase.phrase_probs)
        with np.errstate(divide="ignore"):
            ln_token = np.log(dist.token_part)
            ln_phrase = np.log(dist.phrase_part)
        entry = (dist, ln_token, ln_phrase)
        self._cache[prefix] = entry
        return entry


def beam_search(
    acoustic_factory: Callable[[], ScorerSession],
    language_factory: Callable[[], ScorerSession],
    weights: EncoderWeights,
    keywords: KeywordList,
    cfg: DecodeConfig,
    vocabulary: Vocabulary,
) -> list[Hypothesis]:
    """Beam search over the unified space; returns the n_best hypotheses.

    A hypothesis is terminal once it emits eos (``finished``) or its
    token count reaches ``max_len`` (returned with ``finished`` False).
    Ranking is by raw summed log-score with the deterministic tie-break
    described in the module docstring; no length normalization.
    """
    probe_a, probe_l = acoustic_factory(), language_factory()
    for session in (probe_a, probe_l):
        if session.vocab_size != vocabulary.size:
            raise VocabularyMismatch(
                f"{session.kind} scorer has V={session.vocab_size}, vocabulary has {vocabulary.size}"
            )

    table = build_phrase_table(weights, keywords)
    cache = _StepCache(acoustic_factory, language_factory, weights, table, keywords)
    eos = vocabulary.eos_id

    live = [Hypothesis()]
    done: list[Hypothesis] = []
    while live:
        # (key, parent, choice, dist) for every positive-probability outcome
        candidates = []
        for hyp in live:
            dist, ln_token, ln_phrase = cache.joint(hyp.tokens)
            base_keys = tuple(e.choice_key() for e in hyp.events)
            n_events = len(hyp.events) + 1
            for token_id in np.flatnonzero(np.isfinite(ln_token)):
                token_id = int(token_id)
                key = (-(hyp.log_score + ln_token[token_id]), n_events, base_keys + ((0, token_id),))
                candidates.append((key, hyp, (TOKEN, token_id), dist))
            for slot0 in np.flatnonzero(np.isfinite(ln_phrase)):
                slot = int(slot0) + 1
                key = (-(hyp.log_score + ln_phrase[slot0]), n_events, base_keys + ((1, slot),))
                candidates.append((key, hyp, (COPY, slot), dist))
        candidates.sort(key=lambda item: item[0])

        live = []
        for key, parent, choice, dist in candidates[: cfg.beam_width]:
            child = expand(parent, choice, dist, keywords, eos)
            if child.finished or len(child.tokens) >= cfg.max_len:
                done.append(child)
            else:
                live.append(child)
        done.sort(key=Hypothesis.sort_key)
        del done[cfg.n_best :]
        if live and len(done) == cfg.n_best:
            # Keys only worsen along a lineage: nothing live can still improve
            # the kept pool once its best key is no better than the pool's worst.
            if min(h.sort_key() for h in live) >= done[-1].sort_key():
                break
    return done


def forced_path_decode(
    acoustic_factory: Callable[[], ScorerSession],
    language_factory: Callable[[], ScorerSession],
    weights: EncoderWeights,
    keywords: KeywordList,
    vocabulary: Vocabulary,
    path: tuple[int, ...],
) -> Hypothesis:
    """Greedy teacher-forced decode along a fixed token path.

    Replay files record scores for one path only, so beam search cannot
    branch off them; this walks the recorded path and, at each position,
    greedily takes the most probable on-path outcome: the path's next
    token, or any keyword whose token_ids equal the upcoming path
    segment (probability ties go to the token, then the lower keyword
    slot, matching beam-search event ordering).
    """
    table = build_phrase_table(weights, keywords)
    cache = _StepCache(acoustic_factory, language_factory, weights, table, keywords)
    eos = vocabulary.eos_id
    path = tuple(path)
    hyp = Hypothesis()
    while len(hyp.tokens) < len(path):
        pos = len(hyp.tokens)
        dist, ln_token, ln_phrase = cache.joint(hyp.tokens)
        token = path[pos]
        best = None
        if np.isfinite(ln_token[token]):
            best = ((-ln_token[token], (0, token)), (TOKEN, token))
        for slot in range(1, keywords.slots):
            ids = keywords.keyword(slot).token_ids
            if path[pos : pos + len(ids)] != ids or not np.isfinite(ln_phrase[slot - 1]):
                continue
            key = (-ln_phrase[slot - 1], (1, slot))
            if best is None or key < best[0]:
                best = (key, (COPY, slot))
        if best is None:
            raise ZeroProbabilityChoice(f"no on-path outcome has nonzero probability at position {pos}")
        hyp = expand(hyp, best[1], dist, keywords, eos)
        if hyp.finished:
            break
    return hyp


def render_text(tokens: tuple[int, ...], vocabulary: Vocabulary) -> str:
    """Detokenize, dropping the end-of-sequence marker."""
    strings = vocabulary.id_to_string
    return "".join(strings[t] for t in tokens if t != vocabulary.eos_id)


def hypothesis_record(hyp: Hypothesis, vocabulary: Vocabulary) -> dict:
    events = []
    for event in hyp.events:
        obj: dict = {"pos": event.pos, "kind": event.kind}
        if event.kind == COPY:
            obj["keyword"] = event.index
        events.append(obj)
    return {
        "text": render_text(hyp.tokens, vocabulary),
        "log_score": hyp.log_score,
        "events": events,
        "finished": hyp.finished,
    }


def decode_record(utterance_id: str, hypotheses: list[Hypothesis], vocabulary: Vocabulary) -> dict:
    return {"id": utterance_id, "nbest": [hypothesis_record(h, vocabulary) for h in hypotheses]}
