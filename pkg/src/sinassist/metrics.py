"""Sequence alignment and evaluation metrics.

Levenshtein alignment with deterministic tie-breaking, WER with S/D/I
breakdown, smoothed corpus BLEU, pooled min(precision, recall) GLEU,
exact-match accuracy, mean edit distance, and report aggregation.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Hashable, Iterable, Sequence

from .text import normalize, segment_clusters


class EmptyReference(ValueError):
    """Reference tokenizes to zero tokens; WER is undefined."""


class OpKind(str, Enum):
    MATCH = "match"
    SUBSTITUTE = "substitute"
    DELETE = "delete"
    INSERT = "insert"


@dataclass(frozen=True)
class AlignOp:
    kind: OpKind
    ref_pos: int
    hyp_pos: int
    ref_token: Hashable | None
    hyp_token: Hashable | None


@dataclass(frozen=True)
class EditScript:
    ops: tuple[AlignOp, ...]

    @property
    def cost(self) -> int:
        return sum(1 for op in self.ops if op.kind is not OpKind.MATCH)

    def edits(self) -> list[AlignOp]:
        return [op for op in self.ops if op.kind is not OpKind.MATCH]


def align(ref: Sequence[Hashable], hyp: Sequence[Hashable]) -> EditScript:
    """Minimal-cost edit script under unit costs.

    Tie-break during backtrace: Match > Substitute > Delete > Insert,
    so scripts are reproducible across runs and implementations.
    """
    n, m = len(ref), len(hyp)
    dist = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(1, n + 1):
        dist[i][0] = i
    for j in range(1, m + 1):
        dist[0][j] = j
    for i in range(1, n + 1):
        row, prev = dist[i], dist[i - 1]
        r = ref[i - 1]
        for j in range(1, m + 1):
            sub = prev[j - 1] + (0 if r == hyp[j - 1] else 1)
            row[j] = min(sub, prev[j] + 1, row[j - 1] + 1)

    ops: list[AlignOp] = []
    i, j = n, m
    while i > 0 or j > 0:
        if i > 0 and j > 0 and ref[i - 1] == hyp[j - 1] and dist[i][j] == dist[i - 1][j - 1]:
            ops.append(AlignOp(OpKind.MATCH, i - 1, j - 1, ref[i - 1], hyp[j - 1]))
            i, j = i - 1, j - 1
        elif i > 0 and j > 0 and ref[i - 1] != hyp[j - 1] and dist[i][j] == dist[i - 1][j - 1] + 1:
            ops.append(AlignOp(OpKind.SUBSTITUTE, i - 1, j - 1, ref[i - 1], hyp[j - 1]))
            i, j = i - 1, j - 1
        elif i > 0 and dist[i][j] == dist[i - 1][j] + 1:
            ops.append(AlignOp(OpKind.DELETE, i - 1, j, ref[i - 1], None))
            i -= 1
        else:
            ops.append(AlignOp(OpKind.INSERT, i, j - 1, None, hyp[j - 1]))
            j -= 1
    ops.reverse()
    return EditScript(ops=tuple(ops))


def edit_distance(ref: Sequence[Hashable], hyp: Sequence[Hashable]) -> int:
    return align(ref, hyp).cost


@dataclass(frozen=True)
class WerBreakdown:
    S: int
    D: int
    I: int
    N: int

    @property
    def wer(self) -> float:
        return (self.S + self.D + self.I) / self.N


def _words(text: str) -> list[str]:
    return normalize(text).split()


def wer(ref: str, hyp: str) -> WerBreakdown:
    """Word error rate (S + D + I) / N over whitespace tokens."""
    ref_tokens = _words(ref)
    if not ref_tokens:
        raise EmptyReference(f"reference has no tokens: {ref!r}")
    script = align(ref_tokens, _words(hyp))
    counts = Counter(op.kind for op in script.ops)
    return WerBreakdown(
        S=counts[OpKind.SUBSTITUTE],
        D=counts[OpKind.DELETE],
        I=counts[OpKind.INSERT],
        N=len(ref_tokens),
    )


def corpus_wer(pairs: Iterable[tuple[str, str]]) -> WerBreakdown:
    """Micro-averaged WER: sum S, D, I, N over all pairs, then divide."""
    S = D = I = N = 0
    seen = False
    for ref, hyp in pairs:
        b = wer(ref, hyp)
        S, D, I, N = S + b.S, D + b.D, I + b.I, N + b.N
        seen = True
    if not seen:
        raise EmptyReference("no pairs to aggregate")
    return WerBreakdown(S=S, D=D, I=I, N=N)


def _ngrams(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def bleu(pairs: Sequence[tuple[str, str]], max_n: int = 4) -> float:
    """Corpus BLEU with brevity penalty and uniform 1/max_n weights.

    Add-one smoothing on the clipped-match and candidate counts for
    n >= 2, so short sentences do not zero the score outright.
    """
    matched = [0] * max_n
    total = [0] * max_n
    ref_len = hyp_len = 0
    for ref, hyp in pairs:
        r, h = _words(ref), _words(hyp)
        ref_len += len(r)
        hyp_len += len(h)
        for n in range(1, max_n + 1):
            hyp_counts = _ngrams(h, n)
            ref_counts = _ngrams(r, n)
            matched[n - 1] += sum(min(c, ref_counts[g]) for g, c in hyp_counts.items())
            total[n - 1] += sum(hyp_counts.values())
    if hyp_len == 0 or matched[0] == 0:
        return 0.0
    log_prec = 0.0
    for n in range(1, max_n + 1):
        m, t = matched[n - 1], total[n - 1]
        if n >= 2:
            m, t = m + 1, t + 1
        if m == 0 or t == 0:
            return 0.0
        log_prec += math.log(m / t)
    bp = 1.0 if hyp_len >= ref_len else math.exp(1 - ref_len / hyp_len)
    return bp * math.exp(log_prec / max_n)


def gleu(pairs: Sequence[tuple[str, str]], max_n: int = 4) -> float:
    """Pooled min(precision, recall) over n-grams of order 1..max_n.

    Counts are pooled over all pairs (micro-average), then
    score = min(matched / hyp_total, matched / ref_total).
    """
    matched = hyp_total = ref_total = 0
    for ref, hyp in pairs:
        r, h = _words(ref), _words(hyp)
        for n in range(1, max_n + 1):
            hyp_counts = _ngrams(h, n)
            ref_counts = _ngrams(r, n)
            matched += sum(min(c, ref_counts[g]) for g, c in hyp_counts.items())
            hyp_total += sum(hyp_counts.values())
            ref_total += sum(ref_counts.values())
    if hyp_total == 0 or ref_total == 0 or matched == 0:
        return 0.0
    return min(matched / hyp_total, matched / ref_total)


def exact_match_accuracy(pairs: Sequence[tuple[str, str]]) -> float:
    """Fraction of pairs equal after normalization."""
    if not pairs:
        raise ValueError("no pairs")
    hits = sum(1 for ref, hyp in pairs if normalize(ref) == normalize(hyp))
    return hits / len(pairs)


def mean_edit_distance(pairs: Sequence[tuple[str, str]], granularity: str = "word") -> float:
    """Mean Levenshtein cost per pair at word or cluster granularity.

    Cluster granularity segments the full normalized string, spaces
    included, into grapheme clusters.
    """
    if not pairs:
        raise ValueError("no pairs")
    if granularity not in ("word", "cluster"):
        raise ValueError(f"unknown granularity: {granularity!r}")
    total = 0
    for ref, hyp in pairs:
        if granularity == "word":
            total += edit_distance(_words(ref), _words(hyp))
        else:
            total += edit_distance(
                segment_clusters(normalize(ref)), segment_clusters(normalize(hyp))
            )
    return total / len(pairs)


@dataclass(frozen=True)
class EvaluationReport:
    """Per-module metric bundle: BLEU, GLEU, accuracy, WER, edit distance."""

    label: str
    bleu: float
    gleu: float
    accuracy: float
    wer: float
    edit_distance: float
    sample_count: int
    granularity: str = "word"
    smoothing: str = "add-one n>=2"
    accuracy_from_wer: float = field(default=0.0)

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "bleu": self.bleu,
            "gleu": self.gleu,
            "accuracy": self.accuracy,
            "wer": self.wer,
            "edit_distance": self.edit_distance,
            "sample_count": self.sample_count,
            "granularity": self.granularity,
            "smoothing": self.smoothing,
            "accuracy_from_wer": self.accuracy_from_wer,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False)


def build_report(
    pairs: Sequence[tuple[str, str]], label: str, granularity: str = "word"
) -> EvaluationReport:
    """Compute all metrics for (reference, hypothesis) pairs."""
    if not pairs:
        raise ValueError("no pairs")
    breakdown = corpus_wer(pairs)
    return EvaluationReport(
        label=label,
        bleu=bleu(pairs),
        gleu=gleu(pairs),
        accuracy=exact_match_accuracy(pairs),
        wer=breakdown.wer,
        edit_distance=mean_edit_distance(pairs, granularity),
        sample_count=len(pairs),
        granularity=granularity,
        accuracy_from_wer=1.0 - breakdown.wer,
    )


_METRIC_ROWS = ("BLEU", "GLEU", "Accuracy", "WER", "Edit Distance")
_NAME_WIDTH = 16


def format_score(value: float | str) -> str:
    """Scores render with three decimals; string fixtures verbatim."""
    if isinstance(value, str):
        return value
    return f"{value:.3f}"


def render_table(sections: Sequence[tuple[str, dict[str, float | str]]]) -> str:
    """Fixed-width Metric/Score table, one section per module row.

    Metric names left-justified to 16 columns, scores appended; each
    section is headed by its label and a Metric/Score header line.
    """
    lines: list[str] = []
    for label, scores in sections:
        if lines:
            lines.append("")
        lines.append(label)
        lines.append(f"{'Metric':<{_NAME_WIDTH}}Score")
        for name in _METRIC_ROWS:
            key = name.lower().replace(" ", "_")
            if key in scores:
                lines.append(f"{name:<{_NAME_WIDTH}}{format_score(scores[key])}")
    return "\n".join(lines) + "\n"


def report_table(report: EvaluationReport) -> str:
    return render_table(
        [
            (
                report.label,
                {
                    "bleu": report.bleu,
                    "gleu": report.gleu,
                    "accuracy": report.accuracy,
                    "wer": report.wer,
                    "edit_distance": report.edit_distance,
                },
            )
        ]
    )
