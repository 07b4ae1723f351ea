"""Correlation between rewrite similarity and answer quality."""

from __future__ import annotations

import csv
import json
import logging
import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence, TextIO

from .breakdown import CorrectnessRule
from .data import Variant
from .errors import DataError, UndefinedCorrelationError

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class CorrelationSample:
    qid: str
    qr_similarity: float
    qa_score: float

    def __post_init__(self):
        for name in ("qr_similarity", "qa_score"):
            value = getattr(self, name)
            if not (math.isfinite(value) and 0.0 <= value <= 1.0):
                raise DataError(f"{name} {value} outside [0, 1]", qid=self.qid)


@dataclass
class CorrelationReport:
    qr_metric: str
    qa_metric: str
    pearson_r: float
    series: list[CorrelationSample]

    @property
    def n(self) -> int:
        return len(self.series)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "pearson_r": self.pearson_r,
            "qr_metric": self.qr_metric,
            "qa_metric": self.qa_metric,
        }


def filter_human_correct(
    samples: Mapping[str, Mapping[Variant, float]], rule: CorrectnessRule
) -> dict[str, Mapping[Variant, float]]:
    """Keep only samples whose human rewrite satisfies ``rule``."""
    kept = {qid: v for qid, v in samples.items() if rule.test(v[Variant.HUMAN])}
    if not kept:
        log.warning("no sample passes %s on the human rewrite", rule.label)
    return kept


def pearson(x: Sequence[float], y: Sequence[float]) -> float:
    """Product-moment correlation, two-pass (means first, then centred sums)."""
    n = len(x)
    if n != len(y):
        raise ValueError(f"length mismatch: {n} vs {len(y)}")
    if n < 2:
        raise UndefinedCorrelationError(f"need at least 2 points, got {n}")
    mx = math.fsum(x) / n
    my = math.fsum(y) / n
    dx = [a - mx for a in x]
    dy = [b - my for b in y]
    # r is scale-free; normalizing keeps tiny or huge deviations from under/overflowing
    scale_x = max(abs(d) for d in dx)
    scale_y = max(abs(d) for d in dy)
    if scale_x == 0.0 or scale_y == 0.0:
        raise UndefinedCorrelationError("constant series: correlation undefined")
    dx = [d / scale_x for d in dx]
    dy = [d / scale_y for d in dy]
    sxx = math.fsum(d * d for d in dx)
    syy = math.fsum(d * d for d in dy)
    sxy = math.fsum(a * b for a, b in zip(dx, dy))
    r = sxy / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, r))


def correlate(
    qr_scores: Mapping[str, float],
    qa_scores: Mapping[str, float],
    *,
    qr_metric: str,
    qa_metric: str,
    keep: Iterable[str] | None = None,
) -> CorrelationReport:
    qids = sorted(keep if keep is not None else qr_scores)
    series = []
    for qid in qids:
        if qid not in qr_scores or qid not in qa_scores:
            raise DataError(f"missing {qr_metric} or {qa_metric} score", qid=qid)
        series.append(CorrelationSample(qid, qr_scores[qid], qa_scores[qid]))
    r = pearson([s.qr_similarity for s in series], [s.qa_score for s in series])
    return CorrelationReport(qr_metric, qa_metric, r, series)


SCATTER_HEADER = ["qid", "qr_metric", "qr_value", "qa_metric", "qa_value"]


def write_scatter_csv(report: CorrelationReport, out: TextIO) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(SCATTER_HEADER)
    for s in report.series:
        writer.writerow(
            [s.qid, report.qr_metric, f"{s.qr_similarity:.6f}", report.qa_metric, f"{s.qa_score:.6f}"]
        )


def read_scatter_csv(lines: Iterable[str]) -> list[CorrelationSample]:
    reader = csv.reader(lines)
    if next(reader, None) != SCATTER_HEADER:
        raise DataError("unexpected scatter header")
    out = []
    for lineno, row in enumerate(reader, start=2):
        try:
            out.append(CorrelationSample(row[0], float(row[2]), float(row[4])))
        except (IndexError, ValueError):
            raise DataError("malformed scatter row", line=lineno) from None
    return out


def dump_report(report: CorrelationReport) -> str:
    return json.dumps(report.to_json(), indent=2, sort_keys=True) + "\n"
