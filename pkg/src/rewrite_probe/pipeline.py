"""Corpus loading and per-sample score assembly shared by the CLI subcommands."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

from .breakdown import CorrectnessRule, parse_rule, parse_rules
from .data import (
    VARIANTS,
    EmbeddingStore,
    GoldAnswerSet,
    JudgmentSet,
    QuestionTriple,
    RankedRun,
    SpanPredictionSet,
    ValidationReport,
    Variant,
    parse_embeddings,
    parse_gold,
    parse_qrels,
    parse_run_file,
    parse_spans,
    parse_triples,
    validate_corpus,
)
from .errors import DataError, UsageError
from .metrics import MetricValue, answer_set_recall, ndcg_at_k, precision_at_1, span_f1
from .similarity import (
    DEFAULT_POLICY,
    TokenizationPolicy,
    cosine_similarity,
    cosine_to_unit,
    jaccard_tokens,
    load_stopwords,
    rouge1_recall,
)

TASKS = ("retrieval", "reading")
DEFAULT_RULES = {
    "retrieval": "p@1=1,ndcg@3>0,ndcg@3>=0.5,ndcg@3=1",
    "reading": "span_f1>0,span_f1>=0.5,span_f1=1",
}
DEFAULT_SWEEP_METRIC = {"retrieval": "ndcg@3", "reading": "span_f1"}
DEFAULT_QA_METRIC = {"retrieval": "recall@1000", "reading": "answer_jaccard"}
DEFAULT_FILTER = {"retrieval": "p@1=1", "reading": "span_f1=1"}
QR_METRICS = ("rouge1_recall", "jaccard", "cosine")

_NDCG_RE = re.compile(r"^ndcg@([1-9][0-9]*)$")
_RECALL_RE = re.compile(r"^recall@([1-9][0-9]*)$")


@dataclass
class RunConfig:
    task: str
    triples: Path
    out: Path | None = None
    qrels: Path | None = None
    runs: dict[Variant, Path] = field(default_factory=dict)
    gold: Path | None = None
    spans: dict[Variant, Path] = field(default_factory=dict)
    embeddings: dict[Variant, Path] = field(default_factory=dict)
    rules: list[CorrectnessRule] = field(default_factory=list)
    step: float = 0.02
    stopwords: Path | None = None
    strict: bool = False
    ndcg_k: int = 3
    binarization_grade: int = 2
    sweep_metric: str | None = None
    qr_metric: str = "rouge1_recall"
    qa_metric: str | None = None
    filter_rule: CorrectnessRule | None = None
    no_filter: bool = False

    def __post_init__(self):
        if self.task not in TASKS:
            raise UsageError(f"unknown task {self.task!r}")
        if not 0.0 < self.step <= 1.0:
            raise UsageError(f"--step must be in (0, 1], got {self.step}")
        if self.task == "retrieval":
            if self.qrels is None:
                raise UsageError("task retrieval needs --qrels")
            lacking = [v.value for v in VARIANTS if v not in self.runs]
            if lacking:
                raise UsageError("task retrieval needs --run-" + ", --run-".join(lacking))
        else:
            if self.gold is None:
                raise UsageError("task reading needs --gold")
            lacking = [v.value for v in VARIANTS if v not in self.spans]
            if lacking:
                raise UsageError("task reading needs --spans-" + ", --spans-".join(lacking))
        if not self.rules:
            self.rules = parse_rules(DEFAULT_RULES[self.task])
        if self.sweep_metric is None:
            self.sweep_metric = DEFAULT_SWEEP_METRIC[self.task]
        if self.qa_metric is None:
            self.qa_metric = DEFAULT_QA_METRIC[self.task]
        if self.filter_rule is None and not self.no_filter:
            self.filter_rule = parse_rule(DEFAULT_FILTER[self.task])
        if self.qr_metric not in QR_METRICS:
            raise UsageError(f"unknown QR metric {self.qr_metric!r}")
        for metric in [r.metric for r in self.rules] + [self.sweep_metric]:
            check_variant_metric(self.task, metric)
        if self.filter_rule is not None:
            check_variant_metric(self.task, self.filter_rule.metric)
        check_qa_metric(self.task, self.qa_metric)
        if self.qr_metric == "cosine" and not {Variant.MODEL, Variant.HUMAN} <= set(self.embeddings):
            raise UsageError("QR metric cosine needs --embeddings-model and --embeddings-human")


def check_variant_metric(task: str, metric: str) -> None:
    """Per-variant metrics: ``ndcg@k`` and ``p@1`` for retrieval, ``span_f1`` for reading."""
    ok = (
        (task == "retrieval" and (metric == "p@1" or _NDCG_RE.match(metric)))
        or (task == "reading" and metric == "span_f1")
    )
    if not ok:
        raise UsageError(f"metric {metric!r} is not available for task {task}")


def check_qa_metric(task: str, metric: str) -> None:
    if task == "retrieval" and _RECALL_RE.match(metric):
        return
    if task == "reading" and metric == "answer_jaccard":
        return
    check_variant_metric(task, metric)


@dataclass
class Corpus:
    task: str
    triples: list[QuestionTriple]
    report: ValidationReport
    policy: TokenizationPolicy = DEFAULT_POLICY
    binarization_grade: int = 2
    runs: dict[Variant, dict[str, RankedRun]] = field(default_factory=dict)
    judgments: JudgmentSet | None = None
    gold: GoldAnswerSet | None = None
    spans: SpanPredictionSet = field(default_factory=SpanPredictionSet)
    embeddings: EmbeddingStore = field(default_factory=EmbeddingStore)

    @property
    def qids(self) -> list[str]:
        return [t.qid for t in self.triples]


def _read_lines(path: Path) -> list[str]:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.readlines()
    except (OSError, UnicodeDecodeError) as exc:
        raise DataError(f"cannot read file: {exc}", source=str(path)) from None


def load_corpus(config: RunConfig) -> Corpus:
    warnings: list[str] = []
    triples = parse_triples(_read_lines(config.triples), source=str(config.triples))
    policy = DEFAULT_POLICY
    if config.stopwords is not None:
        policy = TokenizationPolicy(stopwords=load_stopwords(_read_lines(config.stopwords)))

    artifacts: dict[str, set[str]] = {}
    runs: dict[Variant, dict[str, RankedRun]] = {}
    judgments = gold = None
    spans = SpanPredictionSet()
    embeddings = EmbeddingStore()
    if config.task == "retrieval":
        judgments = parse_qrels(
            _read_lines(config.qrels),
            binarization_threshold=config.binarization_grade,
            source=str(config.qrels),
            warnings=warnings,
        )
        artifacts["qrels"] = judgments.qids
        for variant in VARIANTS:
            path = config.runs[variant]
            runs[variant] = parse_run_file(
                _read_lines(path), variant, source=str(path), warnings=warnings
            )
            artifacts[f"run:{variant.value}"] = set(runs[variant])
    else:
        gold = parse_gold(_read_lines(config.gold), source=str(config.gold))
        artifacts["gold"] = gold.qids
        for variant in VARIANTS:
            path = config.spans[variant]
            spans.update(parse_spans(_read_lines(path), variant, source=str(path)))
            artifacts[f"spans:{variant.value}"] = spans.qids(variant)
    for variant, path in sorted(config.embeddings.items(), key=lambda kv: kv[0].position):
        embeddings.update(parse_embeddings(_read_lines(path), variant, source=str(path)))
        artifacts[f"embeddings:{variant.value}"] = embeddings.qids(variant)

    report = validate_corpus(triples, artifacts, strict=config.strict)
    report.warnings = warnings
    kept = set(report.kept)
    triples = sorted((t for t in triples if t.qid in kept), key=lambda t: t.qid)
    return Corpus(
        config.task, triples, report, policy, config.binarization_grade,
        runs, judgments, gold, spans, embeddings,
    )


def variant_scores(corpus: Corpus, metric: str) -> dict[str, dict[Variant, float]]:
    """``{qid: {variant: value}}`` for a per-variant metric over the kept qids."""
    check_variant_metric(corpus.task, metric)
    out = {}
    for qid in corpus.qids:
        values = {}
        for variant in VARIANTS:
            if metric == "span_f1":
                values[variant] = span_f1(
                    corpus.spans.answers[(qid, variant)], corpus.gold.answers[qid], corpus.policy
                )
                continue
            run = corpus.runs[variant][qid]
            if metric == "p@1":
                values[variant] = precision_at_1(run, corpus.judgments, corpus.binarization_grade)
            else:
                k = int(_NDCG_RE.match(metric).group(1))
                values[variant] = ndcg_at_k(run, corpus.judgments, k)
        out[qid] = values
    return out


def metric_records(corpus: Corpus, metrics: list[str]) -> list[MetricValue]:
    records = []
    for metric in metrics:
        for qid, values in variant_scores(corpus, metric).items():
            records += [MetricValue(qid, v, metric, x) for v, x in values.items()]
    return records


def qr_scores(corpus: Corpus, metric: str) -> dict[str, float]:
    """Similarity of the model rewrite (candidate) to the human rewrite (reference)."""
    out = {}
    for t in corpus.triples:
        if metric == "rouge1_recall":
            out[t.qid] = rouge1_recall(t.model_rewrite, t.human_rewrite, corpus.policy)
        elif metric == "jaccard":
            out[t.qid] = jaccard_tokens(t.model_rewrite, t.human_rewrite, corpus.policy)
        elif metric == "cosine":
            vecs = corpus.embeddings.vectors
            try:
                u, v = vecs[(t.qid, Variant.MODEL)], vecs[(t.qid, Variant.HUMAN)]
            except KeyError:
                raise DataError("missing embedding", qid=t.qid) from None
            out[t.qid] = cosine_to_unit(cosine_similarity(u, v))
        else:
            raise UsageError(f"unknown QR metric {metric!r}")
    return out


def qa_scores(corpus: Corpus, metric: str) -> dict[str, float]:
    """Answer-side score per qid: model-variant quality or model-vs-human answer agreement."""
    m = _RECALL_RE.match(metric)
    if m and corpus.task == "retrieval":
        k = int(m.group(1))
        return {
            q: answer_set_recall(corpus.runs[Variant.HUMAN][q], corpus.runs[Variant.MODEL][q], k)
            for q in corpus.qids
        }
    if metric == "answer_jaccard" and corpus.task == "reading":
        return {
            q: jaccard_tokens(
                corpus.spans.answers[(q, Variant.MODEL)],
                corpus.spans.answers[(q, Variant.HUMAN)],
                corpus.policy,
            )
            for q in corpus.qids
        }
    return {q: v[Variant.MODEL] for q, v in variant_scores(corpus, metric).items()}
