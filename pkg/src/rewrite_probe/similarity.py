"""Similarity between question formulations: ROUGE-1 recall, token Jaccard, cosine."""

from __future__ import annotations

import math
import unicodedata
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import UndefinedMetricError

ARTICLES = frozenset({"a", "an", "the"})


@dataclass(frozen=True)
class TokenizationPolicy:
    case_fold: bool = True
    strip_punctuation: bool = True
    stopwords: frozenset[str] = field(default_factory=frozenset)
    drop_articles: bool = False


DEFAULT_POLICY = TokenizationPolicy()


def _strip_punct(token: str) -> str:
    return "".join(ch for ch in token if not unicodedata.category(ch).startswith("P"))


def tokenize(text: str, policy: TokenizationPolicy = DEFAULT_POLICY) -> list[str]:
    tokens = []
    for tok in text.split():
        if policy.case_fold:
            tok = tok.casefold()
        if policy.strip_punctuation:
            tok = _strip_punct(tok)
        if not tok or tok in policy.stopwords:
            continue
        if policy.drop_articles and tok in ARTICLES:
            continue
        tokens.append(tok)
    return tokens


def load_stopwords(lines: Iterable[str], policy: TokenizationPolicy = DEFAULT_POLICY) -> frozenset[str]:
    """Read a one-token-per-line stop-word list, normalized like the text it filters."""
    bare = TokenizationPolicy(policy.case_fold, policy.strip_punctuation)
    words = set()
    for line in lines:
        words.update(tokenize(line, bare))
    return frozenset(words)


def rouge1_recall(candidate: str, reference: str, policy: TokenizationPolicy = DEFAULT_POLICY) -> float:
    """Fraction of reference unigrams covered by the candidate, with clipped counts."""
    ref = Counter(tokenize(reference, policy))
    if not ref:
        raise UndefinedMetricError("ROUGE-1 recall needs a non-empty reference")
    cand = Counter(tokenize(candidate, policy))
    overlap = sum((ref & cand).values())
    return overlap / sum(ref.values())


def jaccard_tokens(a: str, b: str, policy: TokenizationPolicy = DEFAULT_POLICY) -> float:
    sa, sb = set(tokenize(a, policy)), set(tokenize(b, policy))
    if not sa and not sb:
        return 1.0
    return len(sa & sb) / len(sa | sb)


def cosine_similarity(u: Sequence[float], v: Sequence[float]) -> float:
    """Raw cosine in [-1, 1]; see :func:`cosine_to_unit` for the reporting scale."""
    if len(u) != len(v):
        raise UndefinedMetricError(f"dimension mismatch: {len(u)} vs {len(v)}")
    su = math.fsum(x * x for x in u)
    sv = math.fsum(x * x for x in v)
    if su == 0.0 or sv == 0.0:
        raise UndefinedMetricError("cosine similarity of a zero vector")
    dot = math.fsum(x * y for x, y in zip(u, v))
    # sqrt(su * sv) is exactly su when u == v
    return max(-1.0, min(1.0, dot / math.sqrt(su * sv)))


def cosine_to_unit(raw: float) -> float:
    return (raw + 1.0) / 2.0
