"""Brute-force oracle for the golden scoring fixture.

Computes Jaccard similarities with exact fractions, sums over the whole
training set (b = 1), p = a / sum with a = 1, min-max hardness, ranks by
descending mean (id ascending on ties) and three chunks with leftovers in
the hardest chunks. Prints the expected scores CSV.

    python3 golden_scores.py train.jsonl test.jsonl > expected_scores.csv
"""

import json
import re
import sys
from fractions import Fraction


def tokens(text):
    return {t for t in re.split(r"[^0-9a-z]+", text.lower()) if t}


def load(path):
    with open(path, encoding="utf-8") as f:
        return [json.loads(line) for line in f if line.strip()]


def jaccard(a, b):
    union = a | b
    return Fraction(len(a & b), len(union)) if union else Fraction(0)


def main(train_path, test_path, chunks=3):
    train = [tokens(r["text"]) for r in load(train_path)]
    test = load(test_path)
    rows = []
    for rec in test:
        toks = tokens(rec["text"])
        sims = [jaccard(toks, t) for t in train]
        total = sum(sims, Fraction(0))
        rows.append({"id": rec["id"], "sum": total, "mean": total / len(sims),
                     "p": (Fraction(1) / total) if total > 0 else None})
    hi = max(r["mean"] for r in rows)
    lo = min(r["mean"] for r in rows)
    for r in rows:
        r["hard"] = Fraction(1, 2) if hi == lo else (hi - r["mean"]) / (hi - lo)
    rows.sort(key=lambda r: (-r["mean"], r["id"]))
    n = len(rows)
    sizes = [n // chunks + (1 if c < n % chunks else 0) for c in range(chunks)]
    labels = []
    for c in range(chunks, 0, -1):
        labels += [c] * sizes[c - 1]
    fmt = lambda x: "%.10g" % float(x)
    print("id,mean_topb,sum_topb,p_raw,hardness,rank,chunk")
    for rank, (r, c) in enumerate(zip(rows, labels), start=1):
        p = "" if r["p"] is None else fmt(r["p"])
        print(f'{r["id"]},{fmt(r["mean"])},{fmt(r["sum"])},{p},{fmt(r["hard"])},{rank},{c}')


if __name__ == "__main__":
    main(sys.argv[1], sys.argv[2])
