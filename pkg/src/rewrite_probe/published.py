"""Shipped pre-classified outcome records for the two published breakdown tables.

The underlying model runs are not redistributable, so each sample is stored
as its bin index under every rule column plus the human-equals-original flag.
Regenerate with ``scripts/make_published_fixtures.py``.
"""

from __future__ import annotations

from importlib import resources

from .breakdown import BreakdownTable, OutcomeRecord, breakdown_from_records, read_outcome_records

RULES = {
    "trec_cast": ["p@1=1", "ndcg@3>0", "ndcg@3>=0.5", "ndcg@3=1"],
    "canard": ["span_f1>0", "span_f1>=0.5", "span_f1=1"],
}


def load_records(name: str) -> list[OutcomeRecord]:
    if name not in RULES:
        raise KeyError(f"unknown fixture {name!r}; choose from {sorted(RULES)}")
    text = resources.files(__package__).joinpath("fixtures").joinpath(f"{name}.jsonl").read_text("utf-8")
    return read_outcome_records(text.splitlines(), source=f"{name}.jsonl")


def load_table(name: str) -> BreakdownTable:
    return breakdown_from_records(load_records(name), RULES[name])
