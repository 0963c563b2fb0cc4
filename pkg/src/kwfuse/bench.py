"""Decoding throughput over keyword-list sizes.

Real-time factor is wall-clock decoding time divided by the nominal
audio duration of the decoded utterances.  The fixture is fully
synthetic: a character vocabulary, seeded random keyword surfaces, and
hash-based scorers, so the only variable across rows is the keyword
list size.  Larger lists cost more (keyword encoding plus a wider joint
space), so RTF should grow with list size; absolute values are machine
dependent.
"""

from __future__ import annotations

import statistics
import time
from dataclasses import dataclass

import numpy as np

from .decoder import DecodeConfig, beam_search
from .keywords import build_keyword_list
from .phrase_fusion import init_encoder_weights
from .scorers import open_synthetic
from .vocab import Tokenizer, build_char_vocabulary

BENCH_ALPHABET = "abcdefghijklmnopqrstuvwxyz"


@dataclass(frozen=True)
class BenchRow:
    list_size: int
    reps: int
    seconds_min: float
    seconds_median: float
    rtf_min: float
    rtf_median: float


def make_keyword_surfaces(count: int, seed: int, alphabet: str = BENCH_ALPHABET) -> list[str]:
    """``count`` distinct random keyword surfaces, 2 to 5 characters."""
    rng = np.random.default_rng(seed)
    letters = list(alphabet)
    surfaces: list[str] = []
    seen: set[str] = set()
    while len(surfaces) < count:
        length = int(rng.integers(2, 6))
        surface = "".join(rng.choice(letters, size=length))
        if surface not in seen:
            seen.add(surface)
            surfaces.append(surface)
    return surfaces


def run_bench(
    sizes: list[int],
    reps: int = 3,
    seed: int = 0,
    beam_width: int = 4,
    max_len: int = 16,
    utterances: int = 2,
    hidden_dim: int = 8,
    audio_seconds: float = 10.0,
) -> list[BenchRow]:
    """Measure decode wall time per keyword-list size; sizes share a prefix.

    Keyword lists are nested (size 50 is the first 50 of size 200's
    list) so rows differ only in how much of the master list is active.
    """
    if sizes != sorted(set(sizes)):
        raise ValueError("list sizes must be strictly increasing")
    if min(sizes, default=0) < 0 or reps < 1 or utterances < 1 or audio_seconds <= 0:
        raise ValueError("bench parameters out of range")
    vocabulary = build_char_vocabulary(BENCH_ALPHABET)
    tokenizer = Tokenizer(vocabulary)
    master = make_keyword_surfaces(max(sizes, default=0), seed)
    weights = init_encoder_weights(
        seed, vocab_size=vocabulary.size, d_language=hidden_dim, d_acoustic=hidden_dim
    )
    cfg = DecodeConfig(beam_width=beam_width, max_len=max_len, n_best=1)
    dims = (vocabulary.size, hidden_dim)

    rows: list[BenchRow] = []
    for size in sizes:
        keyword_list = build_keyword_list(master[:size], tokenizer)
        seconds: list[float] = []
        for _ in range(reps):
            start = time.perf_counter()
            for u in range(utterances):
                beam_search(
                    lambda u=u: open_synthetic(seed * 1000 + u, dims, "acoustic"),
                    lambda u=u: open_synthetic(seed * 1000 + u + 500, dims, "language"),
                    weights,
                    keyword_list,
                    cfg,
                    vocabulary,
                )
            seconds.append(time.perf_counter() - start)
        total_audio = utterances * audio_seconds
        rows.append(
            BenchRow(
                list_size=size,
                reps=reps,
                seconds_min=min(seconds),
                seconds_median=statistics.median(seconds),
                rtf_min=min(seconds) / total_audio,
                rtf_median=statistics.median(seconds) / total_audio,
            )
        )
    return rows
