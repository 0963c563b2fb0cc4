"""Greedy left-to-right longest-match span location (maximal munch).

Shared by supervision labeling (over token ids) and the biased metrics
(over words or characters).  At each position the longest pattern whose
items equal the upcoming sequence items is taken and the scan resumes
after it, so spans never overlap.  Among equal-length candidates the
earliest pattern in list order wins, which makes the scan deterministic.
"""

from __future__ import annotations

from typing import Sequence


def longest_match_spans(
    sequence: Sequence, patterns: Sequence[Sequence]
) -> list[tuple[int, int, int]]:
    """Return (start, length, pattern_index) spans, left to right.

    ``pattern_index`` is 0-based into ``patterns``.  Empty patterns never
    match.
    """
    spans: list[tuple[int, int, int]] = []
    n = len(sequence)
    pos = 0
    while pos < n:
        best_len = 0
        best_idx = -1
        for idx, pattern in enumerate(patterns):
            size = len(pattern)
            if size <= best_len or size == 0 or pos + size > n:
                continue
            if all(sequence[pos + k] == pattern[k] for k in range(size)):
                best_len = size
                best_idx = idx
        if best_idx >= 0:
            spans.append((pos, best_len, best_idx))
            pos += best_len
        else:
            pos += 1
    return spans
