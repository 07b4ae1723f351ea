import io
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rewrite_probe.data import JudgmentSet, RankedRun, RunEntry, Variant
from rewrite_probe.errors import DataError, UndefinedMetricError
from rewrite_probe.metrics import (
    CutoffConfig,
    MetricValue,
    answer_set_recall,
    ndcg_at_k,
    precision_at_1,
    read_metrics_csv,
    span_f1,
    variant_values,
    write_metrics_csv,
)

from oracles import ndcg_bruteforce


def run_of(docids, qid="q", variant=Variant.HUMAN):
    return RankedRun(qid, variant, tuple(RunEntry(d, i, 10.0 - i) for i, d in enumerate(docids, 1)))


def qrels(grades, qid="q"):
    return JudgmentSet({(qid, d): g for d, g in grades.items()})


def test_ndcg_ideal_order():
    assert ndcg_at_k(run_of(["d1", "d2", "d3"]), qrels({"d1": 2, "d2": 1, "d3": 0}), 3) == 1.0


def test_ndcg_hand_example():
    # DCG = 2/log2(3) + 1/log2(4), IDCG = 2 + 1/log2(3)
    expected = (2 / math.log2(3) + 0.5) / (2 + 1 / math.log2(3))
    value = ndcg_at_k(run_of(["d3", "d1", "d2"]), qrels({"d1": 2, "d2": 1, "d3": 0}), 3)
    assert value == pytest.approx(expected, abs=1e-15)
    assert value == pytest.approx(0.669671816, abs=1e-9)


def test_ndcg_no_positive_judgments():
    assert ndcg_at_k(run_of(["d1", "d2"]), qrels({"d1": 0}), 3) == 0.0
    assert ndcg_at_k(run_of(["d1", "d2"]), JudgmentSet(), 3) == 0.0


def test_ndcg_ideal_uses_unretrieved_judged_docs():
    # d9 is judged but never retrieved, so the run cannot be ideal
    value = ndcg_at_k(run_of(["d1"]), qrels({"d1": 1, "d9": 3}), 3)
    assert value == pytest.approx(1.0 / (3.0 + 1.0 / math.log2(3)), abs=1e-15)


def test_ndcg_only_counts_top_k():
    j = qrels({"d4": 3})
    assert ndcg_at_k(run_of(["d1", "d2", "d3", "d4"]), j, 3) == 0.0
    assert ndcg_at_k(run_of(["d1", "d2", "d3", "d4"]), j, 4) > 0.0


docs = [f"d{i}" for i in range(6)]


@st.composite
def ndcg_instances(draw):
    grades = draw(st.dictionaries(st.sampled_from(docs), st.integers(0, 3), max_size=6))
    ranking = draw(st.permutations(docs))
    depth = draw(st.integers(1, 6))
    k = draw(st.integers(1, 6))
    return ranking[:depth], grades, k


@given(ndcg_instances())
def test_ndcg_matches_bruteforce(instance):
    ranking, grades, k = instance
    assert ndcg_at_k(run_of(ranking), qrels(grades), k) == pytest.approx(
        ndcg_bruteforce(ranking, grades, k), abs=1e-12
    )


@given(ndcg_instances())
def test_ndcg_bounded(instance):
    ranking, grades, k = instance
    assert 0.0 <= ndcg_at_k(run_of(ranking), qrels(grades), k) <= 1.0 + 1e-12


@given(st.dictionaries(st.sampled_from(docs), st.integers(1, 3), min_size=1), st.integers(1, 6))
def test_ndcg_one_when_sorted_and_complete(grades, k):
    ranking = sorted(grades, key=lambda d: -grades[d])
    assert ndcg_at_k(run_of(ranking), qrels(grades), k) == pytest.approx(1.0, abs=1e-12)


def test_precision_at_1():
    j = qrels({"d1": 2, "d2": 1})
    assert precision_at_1(run_of(["d1", "d2"]), j) == 1.0
    assert precision_at_1(run_of(["d2", "d1"]), j) == 0.0
    assert precision_at_1(run_of(["dx", "d1"]), j) == 0.0
    assert precision_at_1(run_of(["d2"]), j, grade=1) == 1.0
    with pytest.raises(UndefinedMetricError):
        precision_at_1(run_of([]), j)


def test_answer_set_recall():
    r = run_of(["d1", "d2", "d3"])
    assert answer_set_recall(r, r, 1000) == 1.0
    assert answer_set_recall(r, run_of(["d2", "d3", "d4"]), 3) == pytest.approx(2 / 3, abs=1e-15)
    assert answer_set_recall(r, run_of(["x", "y"]), 3) == 0.0
    assert answer_set_recall(r, run_of(["d3", "d9"]), 1) == 0.0
    with pytest.raises(UndefinedMetricError):
        answer_set_recall(run_of([]), r)


@given(st.lists(st.sampled_from(docs), min_size=1, unique=True), st.integers(1, 10))
def test_answer_set_recall_reflexive(ranking, k):
    assert answer_set_recall(run_of(ranking), run_of(ranking), k) == 1.0


def test_span_f1_examples():
    assert span_f1("Friedrich Miescher", ["Friedrich Miescher discovered DNA"]) == pytest.approx(2 / 3, abs=1e-12)
    assert span_f1("Friedrich Miescher", ["nobody", "Friedrich Miescher"]) == 1.0
    assert span_f1("Watson", ["Friedrich Miescher"]) == 0.0
    assert span_f1("", [""]) == 1.0
    assert span_f1("", ["something"]) == 0.0
    assert span_f1("something", ["?"]) == 0.0
    with pytest.raises(UndefinedMetricError):
        span_f1("x", [])


span_words = st.lists(st.sampled_from("friedrich miescher discovered dna in 1869 the".split()), max_size=8)


@given(span_words, st.lists(span_words, min_size=1, max_size=3), st.randoms(use_true_random=False))
def test_span_f1_order_invariant_and_bounded(pred, golds, rnd):
    shuffled = list(pred)
    rnd.shuffle(shuffled)
    gold_texts = [" ".join(g) for g in golds]
    value = span_f1(" ".join(pred), gold_texts)
    assert 0.0 <= value <= 1.0
    assert span_f1(" ".join(shuffled), gold_texts) == value


def test_span_f1_surplus_duplicate_deletion_can_increase():
    assert span_f1("friedrich", ["friedrich"]) > span_f1("friedrich friedrich", ["friedrich"])


@given(span_words.filter(bool), span_words.filter(bool), st.data())
def test_span_f1_drop_overlapping_token(pred, gold, data):
    # only tokens inside the clipped overlap: a surplus duplicate can be
    # deleted to raise precision
    overlapping = [i for i, tok in enumerate(pred) if 0 < pred.count(tok) <= gold.count(tok)]
    if not overlapping:
        return
    i = data.draw(st.sampled_from(overlapping))
    smaller = pred[:i] + pred[i + 1:]
    assert span_f1(" ".join(smaller), [" ".join(gold)]) <= span_f1(" ".join(pred), [" ".join(gold)]) + 1e-12


def test_cutoff_config():
    assert CutoffConfig() == CutoffConfig(3, 1000, 2)
    with pytest.raises(ValueError):
        CutoffConfig(ndcg_k=0)


def test_metrics_csv_round_trip_and_order():
    values = [
        MetricValue("q2", Variant.HUMAN, "p@1", 1.0),
        MetricValue("q1", Variant.HUMAN, "ndcg@3", 2 / 3),
        MetricValue("q1", Variant.ORIGINAL, "p@1", 0.0),
        MetricValue("q1", Variant.ORIGINAL, "ndcg@3", 0.25),
    ]
    buf = io.StringIO()
    write_metrics_csv(values, buf)
    text = buf.getvalue()
    assert text.splitlines()[0] == "qid,variant,metric,value"
    assert text.splitlines()[1] == "q1,original,ndcg@3,0.250000"
    assert "q1,human,ndcg@3,0.666667" in text
    assert "\r" not in text
    back = read_metrics_csv(io.StringIO(text))
    assert [(m.qid, m.variant, m.metric) for m in back] == [
        ("q1", Variant.ORIGINAL, "ndcg@3"),
        ("q1", Variant.ORIGINAL, "p@1"),
        ("q1", Variant.HUMAN, "ndcg@3"),
        ("q2", Variant.HUMAN, "p@1"),
    ]
    assert variant_values(back, "p@1") == {"q1": {Variant.ORIGINAL: 0.0}, "q2": {Variant.HUMAN: 1.0}}
    with pytest.raises(DataError):
        read_metrics_csv(io.StringIO("a,b\n"))
