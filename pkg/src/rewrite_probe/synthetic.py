"""Small deterministic corpora for smoke tests and demos.

Runs are derived from the human-rewrite run: a variant whose text is close
to the human rewrite (by ROUGE-1 recall) keeps more of the human run's
documents.  Variants whose text equals the human rewrite get an identical
run, which is what a deterministic QA backend would produce.
"""

from __future__ import annotations

import json
import random
from pathlib import Path

from .data import VARIANTS, Variant, texts_equivalent
from .similarity import rouge1_recall

TRIPLES = [
    ("q01", "What is throat cancer?", "What is throat cancer?", "What is throat cancer?"),
    ("q02", "Is it treatable?", "Is throat cancer treatable?", "Is throat cancer treatable?"),
    ("q03", "What are its symptoms?", "What are the symptoms of throat cancer?",
     "What are the symptoms of throat cancer?"),
    ("q04", "When?", "When was DNA discovered?", "When was DNA discovered?"),
    ("q05", "Who discovered it?", "Who discovered the structure?", "Who discovered the double helix of DNA?"),
    ("q06", "What about environmental factors?",
     "What about environmental factors that led to a breakdown of trade",
     "What about environmental factors during the Bronze Age collapse?"),
    ("q07", "What are good sources in food?", "What are good sources in food for melatonin",
     "What are good sources of melatonin in food?"),
    ("q08", "Describe Netflixs subscriber growth over time",
     "Describe Netflixs subscriber growth over time",
     "Describe Netflix's subscriber growth over time"),
    ("q09", "What is the functionalist theory?", "What is the functionalist theory?",
     "What is the functionalist theory in sociology?"),
    ("q10", "How do they compare?", "How do they compare?",
     "How do the Hamilton Electors compare to faithless electors?"),
]

RUN_DEPTH = 20
# qids where even the human rewrite ranks a non-relevant passage first
HUMAN_MISSES = {"q06", "q10"}
IDEAL = {"q01", "q04", "q07"}


def _variant_run(qid, human_docs, similarity, rng):
    keep = round(RUN_DEPTH * similarity)
    docs = list(human_docs[:keep])
    docs += [f"{qid}_noise{j:02d}" for j in range(RUN_DEPTH - keep)]
    if similarity < 0.7 and keep < RUN_DEPTH:
        # a weak rewrite surfaces a noise passage on top
        docs.insert(0, docs.pop())
    tail = docs[3:]
    rng.shuffle(tail)
    return docs[:3] + tail


def build_retrieval_corpus(seed: int = 13):
    """Return ``(triples, qrels_lines, {variant: run_lines}, {variant: embedding_records})``."""
    rng = random.Random(seed)
    triples, qrels, runs, embeddings = [], [], {v: [] for v in VARIANTS}, {v: [] for v in VARIANTS}
    for qid, original, model, human in TRIPLES:
        triples.append(
            {"qid": qid, "original": original, "model_rewrite": model, "human_rewrite": human}
        )
        judged = [f"{qid}_d{j:02d}" for j in range(6)]
        for docid, grade in zip(judged, (3, 2, 1, 1, 0, 0)):
            qrels.append(f"{qid} 0 {docid} {grade}\n")
        human_docs = [f"{qid}_d{j:02d}" for j in range(RUN_DEPTH)]
        rng.shuffle(human_docs)
        if qid in IDEAL:
            head = [f"{qid}_d00", f"{qid}_d01", f"{qid}_d02"]
        else:
            head = [f"{qid}_d04" if qid in HUMAN_MISSES else f"{qid}_d00"]
        human_docs = head + [d for d in human_docs if d not in head]

        base = [rng.gauss(0.0, 1.0) for _ in range(8)]
        texts = {Variant.ORIGINAL: original, Variant.MODEL: model, Variant.HUMAN: human}
        for variant, text in texts.items():
            if texts_equivalent(text, human):
                docs = list(human_docs)
                sim = 1.0
            else:
                sim = rouge1_recall(text, human)
                docs = _variant_run(qid, human_docs, sim, rng)
            for rank, docid in enumerate(docs, start=1):
                score = round(30.0 - rank * 0.75, 4)
                runs[variant].append(f"{qid} Q0 {docid} {rank} {score} synth-{variant.value}\n")
            noise = 1.0 - sim
            vec = [round(b + noise * rng.gauss(0.0, 1.0), 6) for b in base]
            embeddings[variant].append({"qid": qid, "vector": vec})
    return triples, qrels, runs, embeddings


GOLD = {
    "q01": ["a cancer that develops in the throat", "cancerous tumors in the throat"],
    "q02": ["yes it is often treatable with surgery and radiation"],
    "q03": ["a persistent cough and difficulty swallowing"],
    "q04": ["1869"],
    "q05": ["Watson and Crick"],
    "q06": ["drought and earthquakes"],
    "q07": ["tart cherries and walnuts"],
    "q08": ["from 20 million to 200 million subscribers"],
    "q09": ["a view of society as a system of interrelated parts"],
    "q10": ["they are pledged to vote for another candidate"],
}


def build_reading_corpus(seed: int = 29):
    """Return ``(triples, gold_records, {variant: span_records})``."""
    rng = random.Random(seed)
    triples, _, _, _ = build_retrieval_corpus()
    spans = {v: [] for v in VARIANTS}
    gold = []
    for t in triples:
        qid = t["qid"]
        answer = GOLD[qid][0]
        gold.append({"qid": qid, "answers": GOLD[qid]})
        words = answer.split()
        human_span = " ".join(words[: len(words) - rng.randint(0, 1)])
        for variant, key in zip(VARIANTS, ("original", "model_rewrite", "human_rewrite")):
            if texts_equivalent(t[key], t["human_rewrite"]):
                span = human_span
            else:
                sim = rouge1_recall(t[key], t["human_rewrite"])
                span = " ".join(words[: max(0, round(len(words) * sim) - rng.randint(0, 1))])
            spans[variant].append({"qid": qid, "answer": span})
    return triples, gold, spans


def _jsonl(records) -> str:
    return "".join(json.dumps(r, sort_keys=True) + "\n" for r in records)


def write_retrieval_corpus(directory: Path, seed: int = 13) -> dict[str, Path]:
    """Write triples, qrels, three run files and three embedding files; return their paths."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    triples, qrels, runs, embeddings = build_retrieval_corpus(seed)
    paths = {"triples": directory / "triples.jsonl", "qrels": directory / "qrels.txt"}
    paths["triples"].write_text(_jsonl(triples), encoding="utf-8")
    paths["qrels"].write_text("".join(qrels), encoding="utf-8")
    for v in VARIANTS:
        paths[f"run_{v.value}"] = directory / f"run.{v.value}.txt"
        paths[f"run_{v.value}"].write_text("".join(runs[v]), encoding="utf-8")
        paths[f"embeddings_{v.value}"] = directory / f"embeddings.{v.value}.jsonl"
        paths[f"embeddings_{v.value}"].write_text(_jsonl(embeddings[v]), encoding="utf-8")
    return paths


def write_reading_corpus(directory: Path, seed: int = 29) -> dict[str, Path]:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    triples, gold, spans = build_reading_corpus(seed)
    paths = {"triples": directory / "triples.jsonl", "gold": directory / "gold.jsonl"}
    paths["triples"].write_text(_jsonl(triples), encoding="utf-8")
    paths["gold"].write_text(_jsonl(gold), encoding="utf-8")
    for v in VARIANTS:
        paths[f"spans_{v.value}"] = directory / f"spans.{v.value}.jsonl"
        paths[f"spans_{v.value}"].write_text(_jsonl(spans[v]), encoding="utf-8")
    return paths


def retrieval_args(paths: dict[str, Path]) -> list[str]:
    args = ["--task", "retrieval", "--triples", str(paths["triples"]), "--qrels", str(paths["qrels"])]
    for v in VARIANTS:
        args += [f"--run-{v.value}", str(paths[f"run_{v.value}"])]
    return args


def reading_args(paths: dict[str, Path]) -> list[str]:
    args = ["--task", "reading", "--triples", str(paths["triples"]), "--gold", str(paths["gold"])]
    for v in VARIANTS:
        args += [f"--spans-{v.value}", str(paths[f"spans_{v.value}"])]
    return args
