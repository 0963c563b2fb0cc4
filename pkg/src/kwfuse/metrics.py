"""Normalization, alignment, and keyword-aware error rates.

Error rates are computed from a minimal Levenshtein alignment and split
by reference region: errors whose reference position falls inside a
keyword span count toward the biased rate (B), the rest toward the
unbiased rate (U).  Insertions consume no reference position, so each
one is attributed to the region of the nearest preceding reference
position, or to U at the very start; this convention keeps
B + U = total edit distance exactly.  A keyword occurrence counts as
recalled only if every position of its reference span aligned as a
match.

The text normalizer is a documented simplification (lowercase, strip
punctuation, collapse whitespace; Chinese additionally drops all
spaces) and is versioned in every report, so numbers are comparable
only within one normalizer version.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass

from .errors import EmptyEvaluation, EmptyReference, LengthMismatch
from .matching import longest_match_spans

NORMALIZER_VERSION = "simple-1"

UNITS = ("word", "char")

MATCH = "match"
SUBSTITUTE = "substitute"
DELETE = "delete"
INSERT = "insert"


@dataclass(frozen=True)
class Op:
    """One alignment step; positions are 0-based, None on the absent side."""

    kind: str
    ref_pos: int | None
    hyp_pos: int | None


@dataclass(frozen=True)
class AlignedPair:
    ops: tuple[Op, ...]
    unit: str

    @property
    def distance(self) -> int:
        return sum(1 for op in self.ops if op.kind != MATCH)


@dataclass(frozen=True)
class BiasedReport:
    """Overall/biased/unbiased rates plus recall; None where undefined.

    ``counts`` carries the pooled integers the rates derive from, so
    reports aggregate by summation.
    """

    overall: float
    biased: float | None
    unbiased: float | None
    recall: float | None
    counts: dict
    unit: str


def normalize(text: str, language: str = "en") -> str:
    """Lowercase, strip punctuation, collapse whitespace; zh drops spaces."""
    out = []
    for ch in text.lower():
        out.append(" " if unicodedata.category(ch).startswith("P") else ch)
    collapsed = " ".join("".join(out).split())
    if language == "zh":
        return collapsed.replace(" ", "")
    return collapsed


def split_units(text: str, unit: str) -> list[str]:
    if unit not in UNITS:
        raise ValueError(f"unit must be one of {UNITS}, got {unit!r}")
    return text.split() if unit == "word" else list(text)


def align(ref_units, hyp_units, unit: str = "word") -> AlignedPair:
    """Minimal edit script, unit costs 1/1/1.

    Backtrace ties resolve match > substitute > delete > insert, so the
    script is deterministic.
    """
    ref = list(ref_units)
    hyp = list(hyp_units)
    rows = len(ref) + 1
    cols = len(hyp) + 1
    dp = [[0] * cols for _ in range(rows)]
    for i in range(1, rows):
        dp[i][0] = i
    for j in range(1, cols):
        dp[0][j] = j
    for i in range(1, rows):
        row = dp[i]
        prev = dp[i - 1]
        r = ref[i - 1]
        for j in range(1, cols):
            same = r == hyp[j - 1]
            row[j] = min(prev[j - 1] + (0 if same else 1), prev[j] + 1, row[j - 1] + 1)

    ops: list[Op] = []
    i, j = len(ref), len(hyp)
    while i > 0 or j > 0:
        here = dp[i][j]
        if i > 0 and j > 0 and ref[i - 1] == hyp[j - 1] and here == dp[i - 1][j - 1]:
            ops.append(Op(MATCH, i - 1, j - 1))
            i, j = i - 1, j - 1
        elif i > 0 and j > 0 and here == dp[i - 1][j - 1] + 1:
            ops.append(Op(SUBSTITUTE, i - 1, j - 1))
            i, j = i - 1, j - 1
        elif i > 0 and here == dp[i - 1][j] + 1:
            ops.append(Op(DELETE, i - 1, None))
            i -= 1
        else:
            ops.append(Op(INSERT, None, j - 1))
            j -= 1
    ops.reverse()
    return AlignedPair(tuple(ops), unit)


def _keyword_surfaces(keywords) -> list[str]:
    if hasattr(keywords, "surfaces"):
        return keywords.surfaces()
    return list(keywords)


def _rates(counts: dict, unit: str) -> BiasedReport:
    ref_units = counts["ref_units"]
    if ref_units == 0:
        raise EmptyReference("reference has no units; rates are undefined")
    biased_units = counts["biased_units"]
    unbiased_units = ref_units - biased_units
    return BiasedReport(
        overall=(counts["errors_b"] + counts["errors_u"]) / ref_units,
        biased=counts["errors_b"] / biased_units if biased_units else None,
        unbiased=counts["errors_u"] / unbiased_units if unbiased_units else None,
        recall=counts["keywords_recalled"] / counts["keywords_total"] if counts["keywords_total"] else None,
        counts=counts,
        unit=unit,
    )


def biased_report(ref_text: str, hyp_text: str, keywords, unit: str = "word") -> BiasedReport:
    """Split alignment errors into keyword-span (B) and remainder (U).

    All three text inputs must already be normalized; keyword spans are
    located in the reference by maximal munch over surface units.
    """
    ref = split_units(ref_text, unit)
    hyp = split_units(hyp_text, unit)
    patterns = [split_units(surface, unit) for surface in _keyword_surfaces(keywords)]
    spans = longest_match_spans(ref, patterns)
    in_span = [False] * len(ref)
    for start, length, _ in spans:
        for pos in range(start, start + length):
            in_span[pos] = True

    pair = align(ref, hyp, unit)
    errors_b = 0
    errors_u = 0
    ref_op = [""] * len(ref)
    cursor = 0  # reference positions consumed so far
    for op in pair.ops:
        if op.kind == INSERT:
            if cursor > 0 and in_span[cursor - 1]:
                errors_b += 1
            else:
                errors_u += 1
            continue
        ref_op[op.ref_pos] = op.kind
        cursor = op.ref_pos + 1
        if op.kind != MATCH:
            if in_span[op.ref_pos]:
                errors_b += 1
            else:
                errors_u += 1

    recalled = sum(
        1
        for start, length, _ in spans
        if all(ref_op[pos] == MATCH for pos in range(start, start + length))
    )
    counts = {
        "ref_units": len(ref),
        "biased_units": sum(in_span),
        "errors_b": errors_b,
        "errors_u": errors_u,
        "keywords_total": len(spans),
        "keywords_recalled": recalled,
    }
    return _rates(counts, unit)


def aggregate(reports: list[BiasedReport]) -> BiasedReport:
    """Micro-average: pool all counts, then recompute the rates."""
    if not reports:
        raise EmptyEvaluation("no reports to aggregate")
    units = {r.unit for r in reports}
    if len(units) > 1:
        raise LengthMismatch(f"cannot aggregate across units {sorted(units)}")
    keys = reports[0].counts.keys()
    pooled = {key: sum(r.counts[key] for r in reports) for key in keys}
    return _rates(pooled, reports[0].unit)
