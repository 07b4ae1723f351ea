import math

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from rewrite_probe.errors import UndefinedMetricError
from rewrite_probe.similarity import (
    TokenizationPolicy,
    cosine_similarity,
    cosine_to_unit,
    jaccard_tokens,
    load_stopwords,
    rouge1_recall,
    tokenize,
)

from oracles import multiset_overlap

words = st.lists(st.sampled_from("when was dna discovered who it the a of melatonin food".split()), max_size=12)


def test_tokenize_examples():
    assert tokenize("When was DNA discovered?") == ["when", "was", "dna", "discovered"]
    assert tokenize("") == []
    assert tokenize("Netflix's growth") == ["netflixs", "growth"]
    assert tokenize("  -- !! ") == []


def test_tokenize_policy_switches():
    raw = TokenizationPolicy(case_fold=False, strip_punctuation=False)
    assert tokenize("Netflix's Growth", raw) == ["Netflix's", "Growth"]
    stop = TokenizationPolicy(stopwords=frozenset({"was"}))
    assert tokenize("When was DNA discovered?", stop) == ["when", "dna", "discovered"]
    arts = TokenizationPolicy(drop_articles=True)
    assert tokenize("The answer is a cat", arts) == ["answer", "is", "cat"]


def test_load_stopwords_normalizes():
    assert load_stopwords(["The\n", "WAS\n", "\n"]) == frozenset({"the", "was"})


@given(st.text())
def test_tokenize_idempotent(text):
    once = tokenize(text)
    assert tokenize(" ".join(once)) == once


def test_rouge_examples():
    assert rouge1_recall("when was dna discovered", "when was dna discovered") == 1.0
    assert rouge1_recall("when discovered", "when was dna discovered") == 0.5
    assert rouge1_recall("melatonin food", "when was dna discovered") == 0.0


def test_rouge_clipped_counts():
    assert rouge1_recall("the the the", "the cat") == 0.5
    assert rouge1_recall("the cat", "the the cat cat") == 0.5


def test_rouge_empty_reference():
    with pytest.raises(UndefinedMetricError):
        rouge1_recall("anything", "?!")


@given(words, words)
def test_rouge_matches_multiset_oracle(cand, ref):
    assume(ref)
    expected = multiset_overlap(ref, cand) / len(ref)
    assert rouge1_recall(" ".join(cand), " ".join(ref)) == pytest.approx(expected, abs=1e-15)


@given(words.filter(bool))
def test_rouge_reflexive(ws):
    assert rouge1_recall(" ".join(ws), " ".join(ws)) == 1.0


def test_rouge_asymmetric_pair_exists():
    a, b = "when discovered", "when was dna discovered"
    assert rouge1_recall(a, b) != rouge1_recall(b, a)


@given(words, words.filter(bool), st.randoms(use_true_random=False))
def test_rouge_order_invariant(cand, ref, rnd):
    shuffled = list(cand)
    rnd.shuffle(shuffled)
    assert rouge1_recall(" ".join(shuffled), " ".join(ref)) == rouge1_recall(" ".join(cand), " ".join(ref))


@given(words.filter(bool), words.filter(bool), st.data())
def test_rouge_removing_token_never_increases(cand, ref, data):
    i = data.draw(st.integers(0, len(cand) - 1))
    smaller = cand[:i] + cand[i + 1:]
    assert rouge1_recall(" ".join(smaller), " ".join(ref)) <= rouge1_recall(" ".join(cand), " ".join(ref))


def test_jaccard_examples():
    assert jaccard_tokens("when was it", "when was it") == 1.0
    assert jaccard_tokens("a b", "b c") == pytest.approx(1 / 3, abs=1e-15)
    assert jaccard_tokens("x y", "z") == 0.0
    assert jaccard_tokens("", "?") == 1.0


@given(words, words)
def test_jaccard_symmetric_and_bounded(a, b):
    x, y = " ".join(a), " ".join(b)
    assert jaccard_tokens(x, y) == jaccard_tokens(y, x)
    assert 0.0 <= jaccard_tokens(x, y) <= 1.0
    assert jaccard_tokens(x, x) == 1.0


def test_cosine_examples():
    assert cosine_similarity([0.3, -2.0, 5.0], [0.3, -2.0, 5.0]) == 1.0
    assert cosine_similarity([1, 0], [0, 1]) == 0.0
    assert cosine_similarity([1, 0], [1, 1]) == pytest.approx(1 / math.sqrt(2), abs=1e-15)
    assert cosine_to_unit(-1.0) == 0.0 and cosine_to_unit(1.0) == 1.0


def test_cosine_errors():
    with pytest.raises(UndefinedMetricError):
        cosine_similarity([1, 2], [1, 2, 3])
    with pytest.raises(UndefinedMetricError):
        cosine_similarity([0, 0], [1, 2])


vectors = st.lists(st.floats(-1e3, 1e3, allow_nan=False), min_size=3, max_size=3).filter(
    lambda v: sum(x * x for x in v) > 1e-6
)


@given(vectors, vectors)
def test_cosine_symmetric_bounded_reflexive(u, v):
    assert cosine_similarity(u, v) == cosine_similarity(v, u)
    assert -1.0 <= cosine_similarity(u, v) <= 1.0
    assert cosine_similarity(u, u) == pytest.approx(1.0, abs=1e-12)
