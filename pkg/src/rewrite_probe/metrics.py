"""QA quality metrics: NDCG@k, P@1, answer-set recall@k and span F1.

Metric ids used in exported tables: ``ndcg@<k>``, ``p@1``, ``recall@<k>``
and ``span_f1``.
"""

from __future__ import annotations

import csv
import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence, TextIO

from .data import JudgmentSet, RankedRun, Variant
from .errors import DataError, UndefinedMetricError
from .similarity import DEFAULT_POLICY, TokenizationPolicy, tokenize


@dataclass(frozen=True)
class CutoffConfig:
    ndcg_k: int = 3
    recall_k: int = 1000
    binarization_grade: int = 2

    def __post_init__(self):
        if self.ndcg_k < 1 or self.recall_k < 1:
            raise ValueError("cutoffs must be >= 1")


@dataclass(frozen=True)
class MetricValue:
    qid: str
    variant: Variant
    metric: str
    value: float


def dcg(gains: Sequence[float], k: int) -> float:
    return math.fsum(g / math.log2(i + 2) for i, g in enumerate(gains[:k]))


def ndcg_at_k(run: RankedRun, judgments: JudgmentSet, k: int = 3) -> float:
    """Graded NDCG@k with linear gain; the ideal ranking uses the qid's judged docs."""
    if k < 1:
        raise ValueError("k must be >= 1")
    ideal = sorted(judgments.judged(run.qid).values(), reverse=True)
    idcg = dcg(ideal, k)
    if idcg == 0.0:
        return 0.0
    gains = [judgments.grade(run.qid, e.docid) for e in run.entries[:k]]
    return dcg(gains, k) / idcg


def precision_at_1(run: RankedRun, judgments: JudgmentSet, grade: int | None = None) -> float:
    if not run.entries:
        raise UndefinedMetricError(f"empty run for qid {run.qid}")
    if grade is None:
        grade = judgments.binarization_threshold
    return 1.0 if judgments.grade(run.qid, run.entries[0].docid) >= grade else 0.0


def answer_set_recall(reference: RankedRun, candidate: RankedRun, k: int = 1000) -> float:
    """Share of the reference run's top-k documents that the candidate also returns in its top k."""
    ref = set(reference.docids[:k])
    if not ref:
        raise UndefinedMetricError(f"empty reference run for qid {reference.qid}")
    return len(ref & set(candidate.docids[:k])) / len(ref)


def _f1(pred: list[str], gold: list[str]) -> float:
    if not pred and not gold:
        return 1.0
    if not pred or not gold:
        return 0.0
    overlap = sum((Counter(pred) & Counter(gold)).values())
    if overlap == 0:
        return 0.0
    precision = overlap / len(pred)
    recall = overlap / len(gold)
    return 2 * precision * recall / (precision + recall)


def span_f1(
    prediction: str, golds: Sequence[str], policy: TokenizationPolicy = DEFAULT_POLICY
) -> float:
    """Token-overlap F1 against the best-matching gold answer."""
    if not golds:
        raise UndefinedMetricError("span F1 needs at least one gold answer")
    pred = tokenize(prediction, policy)
    return max(_f1(pred, tokenize(g, policy)) for g in golds)


# -- per-sample table export -------------------------------------------------

METRICS_HEADER = ["qid", "variant", "metric", "value"]


def sort_key(mv: MetricValue):
    return (mv.qid, mv.variant.position, mv.metric)


def write_metrics_csv(values: Iterable[MetricValue], out: TextIO) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(METRICS_HEADER)
    for mv in sorted(values, key=sort_key):
        writer.writerow([mv.qid, mv.variant.value, mv.metric, f"{mv.value:.6f}"])


def read_metrics_csv(lines: Iterable[str]) -> list[MetricValue]:
    reader = csv.reader(lines)
    header = next(reader, None)
    if header != METRICS_HEADER:
        raise DataError(f"unexpected metrics header {header}")
    out = []
    for lineno, row in enumerate(reader, start=2):
        if len(row) != 4:
            raise DataError("expected 4 columns", line=lineno)
        try:
            out.append(MetricValue(row[0], Variant(row[1]), row[2], float(row[3])))
        except ValueError as exc:
            raise DataError(str(exc), line=lineno) from None
    return out


def variant_values(values: Iterable[MetricValue], metric: str) -> dict[str, dict[Variant, float]]:
    """Pivot metric records into ``{qid: {variant: value}}`` for one metric id."""
    table: dict[str, dict[Variant, float]] = {}
    for mv in values:
        if mv.metric == metric:
            table.setdefault(mv.qid, {})[mv.variant] = mv.value
    return table

