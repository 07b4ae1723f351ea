"""``rewrite-probe`` command line.

Exit codes: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import io
import json
import logging
import sys
from pathlib import Path

from .breakdown import build_breakdown, parse_rule, parse_rules, threshold_sweep, write_sweep_csv
from .correlation import correlate, dump_report, filter_human_correct, write_scatter_csv
from .data import VARIANTS
from .errors import DataError, UndefinedCorrelationError, UndefinedMetricError, UsageError
from .metrics import write_metrics_csv
from .pipeline import RunConfig, load_corpus, metric_records, qa_scores, qr_scores, variant_scores
from .svg import scatter_svg, stacked_area_svg

log = logging.getLogger("rewrite_probe")

COMMANDS = ("metrics", "breakdown", "sweep", "correlate", "validate")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--task", choices=["retrieval", "reading"], required=True)
    common.add_argument("--triples", type=Path, required=True)
    common.add_argument("--qrels", type=Path)
    common.add_argument("--gold", type=Path)
    for v in VARIANTS:
        common.add_argument(f"--run-{v.value}", type=Path)
        common.add_argument(f"--spans-{v.value}", type=Path)
        common.add_argument(f"--embeddings-{v.value}", type=Path)
    common.add_argument("--rules", help='comma list like "p@1=1,ndcg@3>=0.5"')
    common.add_argument("--step", type=float, default=0.02)
    common.add_argument("--stopwords", type=Path)
    common.add_argument("--strict", action="store_true")
    common.add_argument("--ndcg-k", type=int, default=3)
    common.add_argument("--grade", type=int, default=2, help="relevance binarization grade")
    common.add_argument("--sweep-metric")
    common.add_argument("--qr-metric", default="rouge1_recall")
    common.add_argument("--qa-metric")
    common.add_argument("--filter-rule", help='human-correctness filter, or "none"')
    common.add_argument("--out", type=Path)

    parser = _Parser(prog="rewrite-probe", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    if args.command != "validate" and args.out is None:
        raise UsageError(f"{args.command} needs --out")
    if args.ndcg_k < 1:
        raise UsageError("--ndcg-k must be >= 1")
    try:
        rules = parse_rules(args.rules) if args.rules else []
        no_filter = (args.filter_rule or "").strip().lower() == "none"
        filter_rule = parse_rule(args.filter_rule) if args.filter_rule and not no_filter else None
    except ValueError as exc:
        raise UsageError(str(exc)) from None

    def per_variant(prefix):
        return {
            v: getattr(args, f"{prefix}_{v.value}")
            for v in VARIANTS
            if getattr(args, f"{prefix}_{v.value}") is not None
        }

    return RunConfig(
        task=args.task,
        triples=args.triples,
        out=args.out,
        qrels=args.qrels,
        runs=per_variant("run"),
        gold=args.gold,
        spans=per_variant("spans"),
        embeddings=per_variant("embeddings"),
        rules=rules,
        step=args.step,
        stopwords=args.stopwords,
        strict=args.strict,
        ndcg_k=args.ndcg_k,
        binarization_grade=args.grade,
        sweep_metric=args.sweep_metric,
        qr_metric=args.qr_metric,
        qa_metric=args.qa_metric,
        filter_rule=filter_rule,
        no_filter=no_filter,
    )


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _csv_text(writer, obj) -> str:
    buf = io.StringIO()
    writer(obj, buf)
    return buf.getvalue()


def _require_samples(corpus):
    if not corpus.triples:
        raise DataError("no questions left after validation")


def cmd_metrics(config: RunConfig) -> None:
    corpus = load_corpus(config)
    _require_samples(corpus)
    metrics = [f"ndcg@{config.ndcg_k}", "p@1"] if config.task == "retrieval" else ["span_f1"]
    records = metric_records(corpus, metrics)
    _write(config.out / "metrics.csv", _csv_text(write_metrics_csv, records))


def cmd_breakdown(config: RunConfig) -> None:
    corpus = load_corpus(config)
    _require_samples(corpus)
    per_metric = {m: variant_scores(corpus, m) for m in {r.metric for r in config.rules}}
    samples = [(t, {m: per_metric[m][t.qid] for m in per_metric}) for t in corpus.triples]
    table = build_breakdown(samples, config.rules)
    _write(
        config.out / "breakdown.json",
        json.dumps(table.to_json(), indent=2, ensure_ascii=False) + "\n",
    )
    markdown = table.to_markdown()
    _write(config.out / "breakdown.md", markdown)
    sys.stdout.write(markdown)


def cmd_sweep(config: RunConfig) -> None:
    corpus = load_corpus(config)
    _require_samples(corpus)
    scores = variant_scores(corpus, config.sweep_metric)
    series = threshold_sweep([scores[q] for q in corpus.qids], config.step, config.sweep_metric)
    _write(config.out / "sweep.csv", _csv_text(write_sweep_csv, series))
    _write(config.out / "sweep.svg", stacked_area_svg(series))


def cmd_correlate(config: RunConfig) -> None:
    corpus = load_corpus(config)
    _require_samples(corpus)
    keep = corpus.qids
    if config.filter_rule is not None:
        human = variant_scores(corpus, config.filter_rule.metric)
        keep = sorted(filter_human_correct(human, config.filter_rule))
    report = correlate(
        qr_scores(corpus, config.qr_metric),
        qa_scores(corpus, config.qa_metric),
        qr_metric=config.qr_metric,
        qa_metric=config.qa_metric,
        keep=keep,
    )
    _write(config.out / "correlation.json", dump_report(report))
    _write(config.out / "scatter.csv", _csv_text(write_scatter_csv, report))
    _write(config.out / "scatter.svg", scatter_svg(report))
    print(f"n={report.n} pearson_r={report.pearson_r:.6f}")


def cmd_validate(config: RunConfig) -> None:
    corpus = load_corpus(config)
    text = corpus.report.render()
    sys.stdout.write(text)
    if config.out is not None:
        _write(config.out / "validation.txt", text)


HANDLERS = {
    "metrics": cmd_metrics,
    "breakdown": cmd_breakdown,
    "sweep": cmd_sweep,
    "correlate": cmd_correlate,
    "validate": cmd_validate,
}


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(message)s")
    args = build_parser().parse_args(argv)
    try:
        config = config_from_args(args)
        HANDLERS[args.command](config)
    except UsageError as exc:
        print(f"rewrite-probe: usage error: {exc}", file=sys.stderr)
        return 1
    except UndefinedCorrelationError as exc:
        print(f"rewrite-probe: undefined correlation (constant series or n < 2): {exc}", file=sys.stderr)
        return 2
    except (DataError, UndefinedMetricError) as exc:
        print(f"rewrite-probe: data error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
