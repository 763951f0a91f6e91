#!/usr/bin/env python3
# Copyright 2026 The Surprisal Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Fixture and reference values for the model agreement grid.

  agreement_oracle.py fixture DIR   writes tokens.txt, ratings_r1.csv, ratings_r2.csv
  agreement_oracle.py expect DIR    writes expected_agreement.json

Scores come from the brute-force Kneser-Ney oracle (memoised, same formulas);
kappa is the direct formula and Kendall tau-b comes from scipy.
"""

import functools
import itertools
import json
import math
import pathlib
import random
import sys

from scipy import stats

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent))
from kn_oracle import BruteKN  # noqa: E402

REPO = "focus/app"
ORDERS = range(1, 11)
VARIANTS = ("full", "minus_repository", "leave_one_issue_out")

WORDS = ("app crash start load file save open close window button menu theme "
         "config error log user click page slow fast memory leak update version "
         "build test fail pass network timeout retry cache disk read write").split()
RARE = "quantum flux capacitor nebula zeppelin obsidian marmalade kaleidoscope".split()

# Ratings for focus/app #1..#10: p_o = 0.8, p_e = 0.5, so kappa = 0.6.
R1 = [2, 2, 2, 2, 2, 4, 4, 4, 4, 4]
R2 = [2, 2, 2, 2, 4, 4, 4, 4, 4, 2]


class MemoKN(BruteKN):
    """BruteKN with caches; the arithmetic is untouched."""

    @functools.lru_cache(maxsize=None)
    def kgram_occurrences(self, k):
        return tuple(super().kgram_occurrences(k))

    @functools.lru_cache(maxsize=None)
    def _counts(self, k):
        raw = {}
        for g in self.kgram_occurrences(k):
            raw[g] = raw.get(g, 0) + 1
        return raw

    @functools.lru_cache(maxsize=None)
    def _lefts(self, k):
        lefts = {}
        for g in self.kgram_occurrences(k + 1):
            lefts.setdefault(g[1:], set()).add(g[0])
        return {g: len(s) for g, s in lefts.items()}

    def raw_count(self, g):
        return self._counts(len(g)).get(g, 0)

    def continuation_count(self, g):
        return self._lefts(len(g)).get(g, 0)

    @functools.lru_cache(maxsize=None)
    def discounts(self, k):
        return super().discounts(k)

    @functools.lru_cache(maxsize=None)
    def prob_level(self, word, hist, k):
        return super().prob_level(word, tuple(hist), k)

    def prob(self, word, context):
        ctx = tuple(context)[-(self.order - 1):] if self.order > 1 else ()
        return self.prob_level(word, ctx, len(ctx) + 1)


def make_fixture(out):
    rng = random.Random(7)
    docs = []
    for repo, count in ((REPO, 10), ("other/lib", 12), ("third/tool", 5)):
        for number in range(1, count + 1):
            length = rng.randint(5, 14)
            toks = [rng.choice(WORDS[:12]) if rng.random() < 0.7 else rng.choice(WORDS) for _ in range(length)]
            if repo == REPO and number in (3, 6, 8, 9):
                for _ in range(number // 3):
                    toks.insert(rng.randrange(len(toks) + 1), rng.choice(RARE))
            if number % 4 == 0:
                toks.insert(rng.randrange(len(toks) + 1), "[CODE]")
            kind = "pull_request" if number % 5 == 0 else "issue"
            docs.append((f"{repo}#{number}", kind, toks))
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "tokens.txt", "w", encoding="utf-8", newline="\n") as f:
        for key, kind, toks in docs:
            f.write(f"{key}\t{kind}\t{' '.join(toks)}\n")
    for name, ratings in (("r1", R1), ("r2", R2)):
        with open(out / f"ratings_{name}.csv", "w", encoding="utf-8", newline="\n") as f:
            f.write("rater_id,issue_id,rating\n")
            for i, r in enumerate(ratings, start=1):
                f.write(f"{name},{REPO}#{i},{r}\n")
            # rated, but absent from the corpus
            f.write(f"{name},{REPO}#99,3\n")


def read_tokens(path):
    docs = []
    with open(path, encoding="utf-8") as f:
        for line in f:
            if line.startswith("#"):
                continue
            key, kind, text = line.rstrip("\n").split("\t")
            repo, number = key.rsplit("#", 1)
            docs.append(((repo, int(number)), text.split()))
    return docs


def read_ratings(paths):
    out = {}
    for p in paths:
        with open(p, encoding="utf-8") as f:
            next(f)
            for line in f:
                rater, key, r = line.strip().split(",")
                repo, number = key.rsplit("#", 1)
                out.setdefault(rater, {})[(repo, int(number))] = int(r)
    return out


def kappa(a, b):
    n = len(a)
    po = sum(x == y for x, y in zip(a, b)) / n
    cats = set(a) | set(b)
    pe = sum((a.count(c) / n) * (b.count(c) / n) for c in cats)
    if po == 1.0:
        return 1.0
    return (po - pe) / (1 - pe)


def expect(out):
    docs = read_tokens(out / "tokens.txt")
    corpus = [t for _, t in docs if t]
    present = {k for k, t in docs if t}
    vocab = sorted({w for t in corpus for w in t})
    ratings = read_ratings(sorted(out.glob("ratings_*.csv")))
    raters = sorted(ratings)
    first = ratings[raters[0]]
    sample = sorted(k for k in first if k[0] == REPO and k in present and all(k in ratings[r] for r in raters))

    pairs = list(itertools.combinations(raters, 2))
    kap = sum(kappa([ratings[a][k] for k in sample], [ratings[b][k] for k in sample]) for a, b in pairs) / len(pairs)
    human = [sum(ratings[r][k] for r in raters) / len(raters) for k in sample]
    by_key = dict((k, t) for k, t in docs if t)

    cells = []
    for variant in VARIANTS:
        for order in ORDERS:
            if variant == "full":
                m = MemoKN(corpus, order, vocab)
                model = [m.score(by_key[k]) for k in sample]
            elif variant == "minus_repository":
                m = MemoKN([t for k, t in docs if t and k[0] != REPO], order, vocab)
                model = [m.score(by_key[k]) for k in sample]
            else:
                model = []
                for k in sample:
                    m = MemoKN([t for kk, t in docs if t and kk != k], order, vocab)
                    model.append(m.score(by_key[k]))
            res = stats.kendalltau(model, human, method="asymptotic")
            cells.append({"variant": variant, "order": order, "tau": float(res.statistic),
                          "p": float(res.pvalue), "scores": model})
            print(variant, order, res.statistic, file=sys.stderr)

    result = {"repository": REPO, "raters": raters,
              "sample": [f"{r}#{n}" for r, n in sample], "kappa": kap,
              "human": human, "cells": cells}
    with open(out / "expected_agreement.json", "w", encoding="utf-8") as f:
        json.dump(result, f, indent=1)
        f.write("\n")


if __name__ == "__main__":
    if len(sys.argv) != 3 or sys.argv[1] not in ("fixture", "expect"):
        sys.stderr.write(__doc__)
        sys.exit(2)
    target = pathlib.Path(sys.argv[2])
    (make_fixture if sys.argv[1] == "fixture" else expect)(target)
