"""Expand the published breakdown counts into per-sample outcome records.

Writes src/rewrite_probe/fixtures/{trec_cast,canard}.jsonl.  Each column is
filled independently: flagged (human == original) samples take the bins of
the parenthetical subcounts, the rest take the remaining counts.
"""

import json
import random
from pathlib import Path

# bins 0..7 = original*1 + model*2 + human*4; (count, subcount) per bin
TREC_CAST = {
    "p@1=1": [(49, 16), (0, 0), (2, 0), (0, 0), (19, 0), (0, 0), (48, 0), (55, 37)],
    "ndcg@3>0": [(10, 1), (0, 0), (0, 0), (1, 0), (10, 0), (1, 0), (63, 0), (88, 52)],
    "ndcg@3>=0.5": [(55, 20), (0, 0), (1, 0), (1, 0), (25, 0), (0, 0), (47, 0), (44, 33)],
    "ndcg@3=1": [(154, 49), (0, 0), (0, 0), (0, 0), (4, 0), (0, 0), (11, 0), (4, 4)],
}
# printed P@1 bin-0 subcount is 14, which leaves the column's subcounts at 51
# against a total of 53; the two missing questions are placed in bin 0

CANARD = {
    "span_f1>0": [(847, 136), (174, 0), (19, 0), (135, 0), (141, 0), (65, 1), (226, 0), (3964, 529)],
    "span_f1>=0.5": [(1855, 235), (193, 0), (35, 2), (153, 0), (288, 0), (57, 1), (324, 0), (2666, 428)],
    "span_f1=1": [(2701, 332), (181, 0), (40, 1), (120, 0), (232, 0), (40, 0), (269, 0), (1988, 333)],
}


def expand(columns, prefix, seed):
    first = next(iter(columns.values()))
    total = sum(c for c, _ in first)
    n_equal = sum(s for _, s in first)
    flags = [True] * n_equal + [False] * (total - n_equal)
    random.Random(seed).shuffle(flags)
    flagged = [i for i, f in enumerate(flags) if f]
    plain = [i for i, f in enumerate(flags) if not f]
    bins = [{} for _ in range(total)]
    for rule, cells in columns.items():
        assert sum(c for c, _ in cells) == total and sum(s for _, s in cells) == n_equal, rule
        fb = [b for b, (_, s) in enumerate(cells) for _ in range(s)]
        pb = [b for b, (c, s) in enumerate(cells) for _ in range(c - s)]
        for i, b in zip(flagged, fb):
            bins[i][rule] = b
        for i, b in zip(plain, pb):
            bins[i][rule] = b
    width = len(str(total))
    return [
        {"sid": f"{prefix}-{i + 1:0{width}d}", "human_equals_original": flags[i], "bins": bins[i]}
        for i in range(total)
    ]


def main():
    out = Path(__file__).resolve().parents[1] / "src" / "rewrite_probe" / "fixtures"
    out.mkdir(parents=True, exist_ok=True)
    for name, columns, seed in (("trec_cast", TREC_CAST, 1), ("canard", CANARD, 2)):
        records = expand(columns, name, seed)
        with open(out / f"{name}.jsonl", "w", encoding="utf-8", newline="\n") as fh:
            for rec in records:
                fh.write(json.dumps(rec, sort_keys=True) + "\n")
        print(f"{name}: {len(records)} records -> {out / (name + '.jsonl')}")


if __name__ == "__main__":
    main()
