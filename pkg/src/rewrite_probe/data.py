"""Data model and readers for runs, qrels, question triples, spans and embeddings.

All readers take an iterable of text lines (an open file works) and an
optional ``source`` name used in error messages.  Non-fatal oddities
(re-sorted runs, duplicate judgments) are logged and appended to the
``warnings`` list when one is passed in.
"""

from __future__ import annotations

import enum
import json
import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

from .errors import DataError

log = logging.getLogger(__name__)


class Variant(enum.Enum):
    ORIGINAL = "original"
    MODEL = "model"
    HUMAN = "human"

    @property
    def position(self) -> int:
        return _VARIANT_ORDER[self]


_VARIANT_ORDER = {Variant.ORIGINAL: 0, Variant.MODEL: 1, Variant.HUMAN: 2}
VARIANTS = (Variant.ORIGINAL, Variant.MODEL, Variant.HUMAN)


def _collapse(text: str) -> str:
    return " ".join(text.split()).casefold()


def texts_equivalent(a: str, b: str) -> bool:
    """Case-folded, whitespace-collapsed equality."""
    return _collapse(a) == _collapse(b)


@dataclass(frozen=True)
class QuestionTriple:
    qid: str
    original: str
    model_rewrite: str
    human_rewrite: str
    human_equals_original: bool

    def text(self, variant: Variant) -> str:
        if variant is Variant.ORIGINAL:
            return self.original
        if variant is Variant.MODEL:
            return self.model_rewrite
        return self.human_rewrite


@dataclass(frozen=True)
class RunEntry:
    docid: str
    rank: int
    score: float


@dataclass(frozen=True)
class RankedRun:
    qid: str
    variant: Variant
    entries: tuple[RunEntry, ...]

    @property
    def docids(self) -> list[str]:
        return [e.docid for e in self.entries]

    def __len__(self) -> int:
        return len(self.entries)


@dataclass
class JudgmentSet:
    """Graded qrels.  Unjudged pairs read as grade 0."""

    grades: dict[tuple[str, str], int] = field(default_factory=dict)
    binarization_threshold: int = 2

    def __post_init__(self):
        self._by_qid: dict[str, dict[str, int]] = {}
        for (qid, docid), grade in self.grades.items():
            if grade < 0:
                raise DataError(f"negative grade {grade} for {docid}", qid=qid)
            self._by_qid.setdefault(qid, {})[docid] = grade

    def grade(self, qid: str, docid: str) -> int:
        return self._by_qid.get(qid, {}).get(docid, 0)

    def judged(self, qid: str) -> dict[str, int]:
        return dict(self._by_qid.get(qid, {}))

    @property
    def qids(self) -> set[str]:
        return set(self._by_qid)


@dataclass
class SpanPredictionSet:
    """Predicted answer text keyed by (qid, variant)."""

    answers: dict[tuple[str, Variant], str] = field(default_factory=dict)

    def update(self, other: "SpanPredictionSet") -> None:
        for key, text in other.answers.items():
            if key in self.answers:
                raise DataError("duplicate span prediction", qid=key[0])
            self.answers[key] = text

    def qids(self, variant: Variant) -> set[str]:
        return {q for q, v in self.answers if v is variant}


@dataclass
class GoldAnswerSet:
    answers: dict[str, list[str]] = field(default_factory=dict)

    @property
    def qids(self) -> set[str]:
        return set(self.answers)


@dataclass
class EmbeddingStore:
    vectors: dict[tuple[str, Variant], tuple[float, ...]] = field(default_factory=dict)
    dimension: int | None = None

    def update(self, other: "EmbeddingStore") -> None:
        if other.dimension is not None:
            if self.dimension is not None and other.dimension != self.dimension:
                raise DataError(
                    f"embedding dimension {other.dimension} != {self.dimension}"
                )
            self.dimension = other.dimension
        for key, vec in other.vectors.items():
            if key in self.vectors:
                raise DataError("duplicate embedding", qid=key[0])
            self.vectors[key] = vec

    def qids(self, variant: Variant) -> set[str]:
        return {q for q, v in self.vectors if v is variant}


def _numbered(lines: Iterable[str]) -> Iterator[tuple[int, str]]:
    for lineno, line in enumerate(lines, start=1):
        if line.strip():
            yield lineno, line


def _warn(warnings: list[str] | None, message: str) -> None:
    log.warning(message)
    if warnings is not None:
        warnings.append(message)


# -- TREC run files ---------------------------------------------------------


def parse_run_file(
    lines: Iterable[str],
    variant: Variant,
    *,
    source: str | None = None,
    warnings: list[str] | None = None,
) -> dict[str, RankedRun]:
    raw: dict[str, list[RunEntry]] = {}
    seen: set[tuple[str, str]] = set()
    for lineno, line in _numbered(lines):
        fields = line.split()
        if len(fields) != 6:
            raise DataError(
                f"expected 6 fields, got {len(fields)}", source=source, line=lineno
            )
        qid, _, docid, rank_s, score_s, _ = fields
        try:
            rank = int(rank_s)
            score = float(score_s)
        except ValueError:
            raise DataError(
                f"bad rank/score {rank_s!r} {score_s!r}", source=source, line=lineno
            ) from None
        if rank < 1 or not math.isfinite(score):
            raise DataError(
                f"rank must be >= 1 and score finite", source=source, line=lineno
            )
        if (qid, docid) in seen:
            raise DataError(
                f"duplicate document {docid}", source=source, line=lineno, qid=qid
            )
        seen.add((qid, docid))
        raw.setdefault(qid, []).append(RunEntry(docid, rank, score))

    runs = {}
    for qid, entries in raw.items():
        entries.sort(key=lambda e: e.rank)
        ranks = [e.rank for e in entries]
        consistent = len(set(ranks)) == len(ranks) and all(
            a.score >= b.score for a, b in zip(entries, entries[1:])
        )
        if not consistent:
            entries.sort(key=lambda e: (-e.score, e.docid))
            _warn(
                warnings,
                f"{source or 'run'}: ranks of qid {qid} disagree with scores; "
                "re-sorted by score",
            )
        normalized = tuple(
            RunEntry(e.docid, i, e.score) for i, e in enumerate(entries, start=1)
        )
        runs[qid] = RankedRun(qid, variant, normalized)
    return runs


def format_run(runs: Mapping[str, RankedRun], tag: str = "rewrite-probe") -> list[str]:
    """Serialize runs back to TREC run lines (qid-sorted, rank order)."""
    out = []
    for qid in sorted(runs):
        for e in runs[qid].entries:
            out.append(f"{qid} Q0 {e.docid} {e.rank} {e.score!r} {tag}\n")
    return out


# -- qrels ------------------------------------------------------------------


def parse_qrels(
    lines: Iterable[str],
    *,
    binarization_threshold: int = 2,
    source: str | None = None,
    warnings: list[str] | None = None,
) -> JudgmentSet:
    grades: dict[tuple[str, str], int] = {}
    for lineno, line in _numbered(lines):
        fields = line.split()
        if len(fields) != 4:
            raise DataError(
                f"expected 4 fields, got {len(fields)}", source=source, line=lineno
            )
        qid, _, docid, grade_s = fields
        try:
            grade = int(grade_s)
        except ValueError:
            raise DataError(
                f"grade {grade_s!r} is not an integer", source=source, line=lineno
            ) from None
        if grade < 0:
            raise DataError(f"negative grade {grade}", source=source, line=lineno)
        key = (qid, docid)
        if key in grades:
            _warn(
                warnings,
                f"{source or 'qrels'}: duplicate judgment for {qid} {docid}; "
                "keeping the maximum grade",
            )
            grade = max(grade, grades[key])
        grades[key] = grade
    return JudgmentSet(grades, binarization_threshold)


# -- JSON-lines inputs ------------------------------------------------------


def _json_records(lines, source):
    for lineno, line in _numbered(lines):
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise DataError(f"invalid JSON: {exc.msg}", source=source, line=lineno) from None
        if not isinstance(record, dict):
            raise DataError("record is not a JSON object", source=source, line=lineno)
        yield lineno, record


def _require(record, key, types, source, lineno):
    if key not in record:
        raise DataError(
            f"missing key {key!r}", source=source, line=lineno, qid=record.get("qid")
        )
    value = record[key]
    if not isinstance(value, types) or isinstance(value, bool):
        raise DataError(
            f"key {key!r} has wrong type", source=source, line=lineno,
            qid=record.get("qid"),
        )
    return value


def parse_triples(lines: Iterable[str], *, source: str | None = None) -> list[QuestionTriple]:
    triples = []
    seen = set()
    for lineno, rec in _json_records(lines, source):
        qid = _require(rec, "qid", str, source, lineno)
        if not qid:
            raise DataError("empty qid", source=source, line=lineno)
        texts = []
        for key in ("original", "model_rewrite", "human_rewrite"):
            text = _require(rec, key, str, source, lineno)
            if not text.strip():
                raise DataError(f"empty {key}", source=source, line=lineno, qid=qid)
            texts.append(text)
        if qid in seen:
            raise DataError("duplicate qid", source=source, line=lineno, qid=qid)
        seen.add(qid)
        flag = rec.get("human_equals_original")
        if flag is None:
            flag = texts_equivalent(texts[0], texts[2])
        elif not isinstance(flag, bool):
            raise DataError(
                "human_equals_original must be a boolean",
                source=source, line=lineno, qid=qid,
            )
        triples.append(QuestionTriple(qid, *texts, flag))
    return triples


def parse_spans(
    lines: Iterable[str], variant: Variant, *, source: str | None = None
) -> SpanPredictionSet:
    answers = {}
    for lineno, rec in _json_records(lines, source):
        qid = _require(rec, "qid", str, source, lineno)
        answer = _require(rec, "answer", str, source, lineno)
        if (qid, variant) in answers:
            raise DataError("duplicate qid", source=source, line=lineno, qid=qid)
        answers[(qid, variant)] = answer
    return SpanPredictionSet(answers)


def parse_gold(lines: Iterable[str], *, source: str | None = None) -> GoldAnswerSet:
    answers = {}
    for lineno, rec in _json_records(lines, source):
        qid = _require(rec, "qid", str, source, lineno)
        golds = _require(rec, "answers", list, source, lineno)
        if not golds:
            raise DataError("empty gold answer list", source=source, line=lineno, qid=qid)
        if not all(isinstance(g, str) for g in golds):
            raise DataError("gold answers must be strings", source=source, line=lineno, qid=qid)
        if qid in answers:
            raise DataError("duplicate qid", source=source, line=lineno, qid=qid)
        answers[qid] = list(golds)
    return GoldAnswerSet(answers)


def parse_embeddings(
    lines: Iterable[str], variant: Variant, *, source: str | None = None
) -> EmbeddingStore:
    store = EmbeddingStore()
    for lineno, rec in _json_records(lines, source):
        qid = _require(rec, "qid", str, source, lineno)
        vector = _require(rec, "vector", list, source, lineno)
        try:
            vec = tuple(float(x) for x in vector)
        except (TypeError, ValueError):
            raise DataError("non-numeric vector", source=source, line=lineno, qid=qid) from None
        if not vec or not all(math.isfinite(x) for x in vec):
            raise DataError("empty or non-finite vector", source=source, line=lineno, qid=qid)
        if all(x == 0.0 for x in vec):
            raise DataError("all-zero vector", source=source, line=lineno, qid=qid)
        if store.dimension is None:
            store.dimension = len(vec)
        elif len(vec) != store.dimension:
            raise DataError(
                f"vector length {len(vec)} != {store.dimension}",
                source=source, line=lineno, qid=qid,
            )
        if (qid, variant) in store.vectors:
            raise DataError("duplicate qid", source=source, line=lineno, qid=qid)
        store.vectors[(qid, variant)] = vec
    return store


# -- corpus validation ------------------------------------------------------


@dataclass
class ValidationReport:
    kept: list[str]
    missing: dict[str, list[str]]  # qid -> artifacts lacking it
    extra: dict[str, list[str]]  # artifact -> qids not in the triples
    warnings: list[str] = field(default_factory=list)

    @property
    def dropped(self) -> list[str]:
        return sorted(self.missing)

    @property
    def issues(self) -> list[str]:
        out = [
            f"qid {qid} missing from {', '.join(arts)}"
            for qid, arts in sorted(self.missing.items())
        ]
        out += [
            f"{art} has qids absent from triples: {', '.join(qids)}"
            for art, qids in sorted(self.extra.items())
        ]
        return out

    @property
    def clean(self) -> bool:
        return not self.missing and not self.extra

    def render(self) -> str:
        issues = self.issues
        lines = [f"{len(issues)} issues"]
        lines += [f"  {i}" for i in issues]
        lines += [f"  warning: {w}" for w in self.warnings]
        lines.append(f"{len(self.kept)} qids kept, {len(self.dropped)} dropped")
        return "\n".join(lines) + "\n"


def validate_corpus(
    triples: Iterable[QuestionTriple],
    artifacts: Mapping[str, Iterable[str]],
    *,
    strict: bool = False,
) -> ValidationReport:
    """Check that every artifact covers exactly the triples' qids.

    ``artifacts`` maps a display name (e.g. ``"run:model"`` or ``"qrels"``)
    to the qids that artifact provides.  Lenient mode keeps the intersection
    of all qid sets; strict mode raises on any gap.
    """
    tqids = {t.qid for t in triples}
    sets = {name: set(qids) for name, qids in artifacts.items()}
    missing: dict[str, list[str]] = {}
    for qid in sorted(tqids):
        lacking = [name for name in sorted(sets) if qid not in sets[name]]
        if lacking:
            missing[qid] = lacking
    extra = {
        name: sorted(qids - tqids) for name, qids in sets.items() if qids - tqids
    }
    kept = sorted(tqids.intersection(*sets.values()) if sets else tqids)
    report = ValidationReport(kept, missing, extra)
    if strict and not report.clean:
        gaps = sorted(set(missing) | {q for qs in extra.values() for q in qs})
        raise DataError("corpus coverage gaps for qids: " + ", ".join(gaps))
    return report
