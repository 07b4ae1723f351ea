"""Outcome classification across question formulations.

Every sample gets a correctness triple (original, model rewrite, human
rewrite) under a correctness rule.  The triple maps to one of eight bins,
``original * 1 + model * 2 + human * 4``, so bins 0-3 are the samples the
QA model gets wrong even with the human rewrite and bins 4-7 the ones it
gets right.
"""

from __future__ import annotations

import csv
import enum
import json
import logging
import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple, Sequence, TextIO

from .data import QuestionTriple, Variant
from .errors import DataError, UndefinedMetricError

log = logging.getLogger(__name__)

TOLERANCE = 1e-9
METRIC_ALIASES = {"f1": "span_f1"}
TICK, CROSS = "✓", "×"


class Comparator(enum.Enum):
    GT = ">"
    GE = ">="
    EQ = "="


@dataclass(frozen=True)
class CorrectnessRule:
    metric: str
    comparator: Comparator
    threshold: float

    def __post_init__(self):
        if not 0.0 <= self.threshold <= 1.0:
            raise ValueError(f"threshold {self.threshold} outside [0, 1]")

    def test(self, value: float) -> bool:
        # one tolerance band for all comparators so boundary values like 2/3 behave
        if self.comparator is Comparator.GT:
            return value > self.threshold + TOLERANCE
        if self.comparator is Comparator.GE:
            return value >= self.threshold - TOLERANCE
        return abs(value - self.threshold) <= TOLERANCE

    @property
    def label(self) -> str:
        return f"{self.metric}{self.comparator.value}{self.threshold:g}"

    def __str__(self) -> str:
        return self.label


_RULE_RE = re.compile(r"^\s*([A-Za-z0-9_@]+)\s*(>=|>|=)\s*([0-9]*\.?[0-9]+)\s*$")


def parse_rule(text: str) -> CorrectnessRule:
    """Parse ``<metric><cmp><value>``, e.g. ``ndcg@3>=0.5``."""
    m = _RULE_RE.match(text)
    if not m:
        raise ValueError(f"cannot parse rule {text!r}")
    metric = m.group(1).lower()
    metric = METRIC_ALIASES.get(metric, metric)
    return CorrectnessRule(metric, Comparator(m.group(2)), float(m.group(3)))


def parse_rules(text: str) -> list[CorrectnessRule]:
    return [parse_rule(part) for part in text.split(",") if part.strip()]


class OutcomePattern(NamedTuple):
    original: bool
    model: bool
    human: bool

    @property
    def bin(self) -> int:
        return int(self.original) + 2 * int(self.model) + 4 * int(self.human)

    @classmethod
    def from_bin(cls, index: int) -> "OutcomePattern":
        if not 0 <= index <= 7:
            raise ValueError(f"bin index {index} outside 0..7")
        return cls(bool(index & 1), bool(index & 2), bool(index & 4))

    @property
    def symbols(self) -> str:
        return "".join(TICK if ok else CROSS for ok in self)


def evaluate_correctness(
    values: Mapping[Variant, float], rule: CorrectnessRule, qid: str | None = None
) -> OutcomePattern:
    flags = []
    for variant in (Variant.ORIGINAL, Variant.MODEL, Variant.HUMAN):
        if variant not in values:
            raise DataError(
                f"no {rule.metric} value for variant {variant.value}", qid=qid
            )
        flags.append(rule.test(values[variant]))
    return OutcomePattern(*flags)


@dataclass
class BreakdownTable:
    """Eight bins by rule columns of (count, human-equals-original subcount)."""

    rules: list[str]
    counts: dict[str, list[int]]
    subcounts: dict[str, list[int]]
    total: int = 0
    total_equal: int = 0
    warnings: list[str] = field(default_factory=list, compare=False)

    @classmethod
    def empty(cls, rules: Sequence[str]) -> "BreakdownTable":
        rules = list(rules)
        return cls(rules, {r: [0] * 8 for r in rules}, {r: [0] * 8 for r in rules})

    def add(self, patterns: Mapping[str, OutcomePattern], human_equals_original: bool) -> None:
        self.total += 1
        self.total_equal += int(human_equals_original)
        for rule in self.rules:
            b = patterns[rule].bin
            self.counts[rule][b] += 1
            if human_equals_original:
                self.subcounts[rule][b] += 1

    def merge(self, other: "BreakdownTable") -> "BreakdownTable":
        if self.rules != other.rules:
            raise ValueError("cannot merge tables over different rules")
        return BreakdownTable(
            list(self.rules),
            {r: [a + b for a, b in zip(self.counts[r], other.counts[r])] for r in self.rules},
            {r: [a + b for a, b in zip(self.subcounts[r], other.subcounts[r])] for r in self.rules},
            self.total + other.total,
            self.total_equal + other.total_equal,
            self.warnings + other.warnings,
        )

    def column(self, rule: str) -> list[tuple[int, int]]:
        return list(zip(self.counts[rule], self.subcounts[rule]))

    def check_partition(self) -> None:
        for rule in self.rules:
            counts, subs = self.counts[rule], self.subcounts[rule]
            if sum(counts) != self.total:
                raise AssertionError(f"{rule}: counts sum {sum(counts)} != {self.total}")
            if sum(subs) != self.total_equal:
                raise AssertionError(
                    f"{rule}: subcounts sum {sum(subs)} != {self.total_equal}"
                )
            if any(s > c for c, s in zip(counts, subs)):
                raise AssertionError(f"{rule}: subcount exceeds count")

    # -- export ---------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "rules": list(self.rules),
            "bins": [
                {
                    "bin": b,
                    "pattern": OutcomePattern.from_bin(b).symbols,
                    "counts": [self.counts[r][b] for r in self.rules],
                    "subcounts": [self.subcounts[r][b] for r in self.rules],
                }
                for b in range(8)
            ],
            "totals": {"samples": self.total, "human_equals_original": self.total_equal},
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "BreakdownTable":
        try:
            rules = list(obj["rules"])
            table = cls.empty(rules)
            for entry in obj["bins"]:
                b = entry["bin"]
                for i, rule in enumerate(rules):
                    table.counts[rule][b] = int(entry["counts"][i])
                    table.subcounts[rule][b] = int(entry["subcounts"][i])
            table.total = int(obj["totals"]["samples"])
            table.total_equal = int(obj["totals"]["human_equals_original"])
        except (KeyError, IndexError, TypeError) as exc:
            raise DataError(f"malformed breakdown JSON: {exc!r}") from None
        return table

    def to_markdown(self) -> str:
        def cell(count, sub):
            return f"{count} ({sub})" if sub else str(count)

        header = ["Original", "QR", "Human"] + self.rules
        lines = [
            "| " + " | ".join(header) + " |",
            "|" + "---|" * len(header),
        ]
        for b in range(8):
            pat = OutcomePattern.from_bin(b)
            row = [TICK if ok else CROSS for ok in pat]
            row += [cell(self.counts[r][b], self.subcounts[r][b]) for r in self.rules]
            lines.append("| " + " | ".join(row) + " |")
        lines.append("")
        lines.append(f"Total {cell(self.total, self.total_equal)}")
        return "\n".join(lines) + "\n"


def build_breakdown(
    samples: Iterable[tuple[QuestionTriple, Mapping[str, Mapping[Variant, float]]]],
    rules: Sequence[CorrectnessRule],
) -> BreakdownTable:
    """Classify each (triple, {metric: {variant: value}}) sample under every rule."""
    table = BreakdownTable.empty([r.label for r in rules])
    for triple, values in samples:
        patterns = {}
        for rule in rules:
            if rule.metric not in values:
                raise DataError(f"no values for metric {rule.metric}", qid=triple.qid)
            pat = evaluate_correctness(values[rule.metric], rule, qid=triple.qid)
            patterns[rule.label] = pat
            if triple.human_equals_original and pat.human != pat.original:
                msg = (
                    f"qid {triple.qid}: human rewrite equals original but "
                    f"outcomes differ under {rule.label}"
                )
                log.warning(msg)
                table.warnings.append(msg)
        table.add(patterns, triple.human_equals_original)
    if table.total == 0:
        raise DataError("no samples to break down")
    return table


HUMAN_CORRECT_BINS = (4, 5, 6, 7)
ORIGINAL_AND_HUMAN_CORRECT_BINS = (5, 7)


def rewriting_impact_fraction(column: Sequence[tuple[int, int]], scope: str = "all") -> float:
    """Share of human-answerable questions that the original question already answers.

    ``column`` holds (count, subcount) for bins 0..7.  With
    ``scope="human_differs"`` questions the annotators left unchanged are
    removed from every human-correct bin first.
    """
    if scope not in ("all", "human_differs"):
        raise ValueError(f"unknown scope {scope!r}")
    if len(column) != 8:
        raise ValueError("a breakdown column has 8 bins")

    def size(b):
        count, sub = column[b]
        return count - sub if scope == "human_differs" else count

    denominator = sum(size(b) for b in HUMAN_CORRECT_BINS)
    if denominator <= 0:
        raise UndefinedMetricError("no human-correct questions in this column")
    return sum(size(b) for b in ORIGINAL_AND_HUMAN_CORRECT_BINS) / denominator


# -- threshold sweep ----------------------------------------------------------


class Region(enum.Enum):
    QA_ERROR = "qa_error"
    QR_ERROR = "qr_error"
    CORRECT_WITH_REWRITING = "correct_with_rewriting"
    CORRECT_WITHOUT_REWRITING = "correct_without_rewriting"


REGIONS = tuple(Region)


def region_of(pattern: OutcomePattern) -> Region:
    if not pattern.human:
        return Region.QA_ERROR
    if not pattern.model:
        return Region.QR_ERROR
    if pattern.original:
        return Region.CORRECT_WITHOUT_REWRITING
    return Region.CORRECT_WITH_REWRITING


def threshold_grid(step: float = 0.02) -> list[float]:
    if not 0.0 < step <= 1.0:
        raise ValueError(f"step {step} outside (0, 1]")
    n = int(1.0 / step + TOLERANCE)
    return [round(i * step, 10) for i in range(n + 1)]


def sweep_rule(metric: str, threshold: float) -> CorrectnessRule:
    """Strict ``> 0`` at the zero threshold, inclusive ``>= t`` everywhere else."""
    if threshold == 0.0:
        return CorrectnessRule(metric, Comparator.GT, 0.0)
    return CorrectnessRule(metric, Comparator.GE, threshold)


@dataclass
class SweepSeries:
    metric: str
    thresholds: list[float]
    proportions: list[dict[Region, float]]

    def rows(self) -> list[list[float]]:
        return [[t] + [p[r] for r in REGIONS] for t, p in zip(self.thresholds, self.proportions)]


def threshold_sweep(
    samples: Sequence[Mapping[Variant, float]], step: float = 0.02, metric: str = "value"
) -> SweepSeries:
    if not samples:
        raise DataError("threshold sweep needs at least one sample")
    grid = threshold_grid(step)
    proportions = []
    n = len(samples)
    for t in grid:
        rule = sweep_rule(metric, t)
        counts = dict.fromkeys(REGIONS, 0)
        for values in samples:
            counts[region_of(evaluate_correctness(values, rule))] += 1
        proportions.append({r: counts[r] / n for r in REGIONS})
    return SweepSeries(metric, grid, proportions)


SWEEP_HEADER = ["threshold"] + [r.value for r in REGIONS]


def write_sweep_csv(series: SweepSeries, out: TextIO) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(SWEEP_HEADER)
    for row in series.rows():
        writer.writerow([f"{x:.6f}" for x in row])


def read_sweep_csv(lines: Iterable[str], metric: str = "value") -> SweepSeries:
    reader = csv.reader(lines)
    if next(reader, None) != SWEEP_HEADER:
        raise DataError("unexpected sweep header")
    thresholds, proportions = [], []
    for lineno, row in enumerate(reader, start=2):
        try:
            nums = [float(x) for x in row]
        except ValueError:
            raise DataError("non-numeric sweep row", line=lineno) from None
        if len(nums) != 5:
            raise DataError("expected 5 columns", line=lineno)
        thresholds.append(nums[0])
        proportions.append(dict(zip(REGIONS, nums[1:])))
    return SweepSeries(metric, thresholds, proportions)


# -- pre-classified outcome records -------------------------------------------


@dataclass(frozen=True)
class OutcomeRecord:
    """One sample already classified under several rules (bin index per rule label)."""

    sid: str
    human_equals_original: bool
    bins: Mapping[str, int]

    def to_json(self) -> dict:
        return {
            "sid": self.sid,
            "human_equals_original": self.human_equals_original,
            "bins": dict(self.bins),
        }


def read_outcome_records(lines: Iterable[str], source: str | None = None) -> list[OutcomeRecord]:
    records = []
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
            rec = OutcomeRecord(
                str(obj["sid"]),
                bool(obj["human_equals_original"]),
                {str(k): int(v) for k, v in obj["bins"].items()},
            )
        except (json.JSONDecodeError, KeyError, TypeError, ValueError, AttributeError):
            raise DataError("malformed outcome record", source=source, line=lineno) from None
        if any(not 0 <= b <= 7 for b in rec.bins.values()):
            raise DataError("bin index outside 0..7", source=source, line=lineno)
        records.append(rec)
    return records


def breakdown_from_records(records: Iterable[OutcomeRecord], rules: Sequence[str]) -> BreakdownTable:
    table = BreakdownTable.empty(rules)
    for rec in records:
        try:
            patterns = {r: OutcomePattern.from_bin(rec.bins[r]) for r in table.rules}
        except KeyError as exc:
            raise DataError(f"record lacks rule {exc}", qid=rec.sid) from None
        table.add(patterns, rec.human_equals_original)
    return table
