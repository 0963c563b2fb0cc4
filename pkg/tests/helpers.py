"""Fixture builders shared across test modules."""

from __future__ import annotations

import string

import numpy as np

from kwfuse import (
    EncoderWeights,
    Keyword,
    KeywordList,
    Vocabulary,
    init_encoder_weights,
    open_synthetic,
)


def tiny_vocabulary(size: int) -> Vocabulary:
    """Character vocabulary of exactly ``size`` tokens, eos last."""
    if not 2 <= size <= 27:
        raise ValueError("tiny vocabulary supports 2..27 tokens")
    letters = string.ascii_lowercase[: size - 1]
    return Vocabulary(tuple(letters) + ("<eos>",), eos_id=size - 1)


def random_keyword_list(rng: np.random.Generator, n: int, vocabulary: Vocabulary, max_tokens: int = 3) -> KeywordList:
    """``n`` distinct random keywords over non-eos token ids."""
    usable = [t for t in range(vocabulary.size) if t != vocabulary.eos_id]
    seen: set[tuple[int, ...]] = set()
    entries: list[Keyword] = []
    while len(entries) < n:
        length = int(rng.integers(1, max_tokens + 1))
        ids = tuple(int(rng.choice(usable)) for _ in range(length))
        if ids in seen:
            continue
        seen.add(ids)
        surface = "".join(vocabulary.id_to_string[t] for t in ids)
        entries.append(Keyword(surface, ids))
    return KeywordList(tuple(entries))


def decode_setup(
    seed: int,
    vocab_size: int,
    n_keywords: int,
    d_acoustic: int = 3,
    d_language: int = 4,
):
    """(acoustic_factory, language_factory, weights, keywords, vocabulary)."""
    vocabulary = tiny_vocabulary(vocab_size)
    rng = np.random.default_rng(seed + 77_000)
    keywords = random_keyword_list(rng, n_keywords, vocabulary)
    weights: EncoderWeights = init_encoder_weights(
        seed, vocab_size=vocab_size, embed_dim=4, repr_dim=6, d_language=d_language, d_acoustic=d_acoustic
    )
    dims_a = (vocab_size, d_acoustic)
    dims_l = (vocab_size, d_language)

    def acoustic():
        return open_synthetic(seed * 2 + 1, dims_a, "acoustic")

    def language():
        return open_synthetic(seed * 2 + 2, dims_l, "language")

    return acoustic, language, weights, keywords, vocabulary
