"""Question-rewriting robustness probes for conversational QA runs."""

from .breakdown import (
    BreakdownTable,
    Comparator,
    CorrectnessRule,
    OutcomePattern,
    build_breakdown,
    evaluate_correctness,
    parse_rule,
    rewriting_impact_fraction,
    threshold_sweep,
)
from .correlation import correlate, filter_human_correct, pearson
from .data import Variant
from .errors import DataError, UndefinedCorrelationError, UndefinedMetricError
from .metrics import answer_set_recall, ndcg_at_k, precision_at_1, span_f1
from .similarity import TokenizationPolicy, cosine_similarity, jaccard_tokens, rouge1_recall, tokenize

__version__ = "0.1.0"
