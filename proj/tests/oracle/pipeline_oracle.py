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

"""Expected bits per token for the bundled fixture run.

  pipeline_oracle.py TOKENS ORDER > expected_scores.tsv

Trains the brute-force Kneser-Ney oracle on every non-empty document of the
token dump and scores each one (conditional n-gram mode). Output lines are
"key<TAB>bits_per_token<TAB>token_count" with repr() floats.
"""

import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent))
from agreement_oracle import MemoKN, read_tokens  # noqa: E402


def main(argv):
    if len(argv) != 3:
        sys.stderr.write(__doc__)
        return 2
    docs = [(k, t) for k, t in read_tokens(argv[1]) if t]
    corpus = [t for _, t in docs]
    vocab = sorted({w for t in corpus for w in t})
    model = MemoKN(corpus, int(argv[2]), vocab)
    for (repo, number), toks in docs:
        print(f"{repo}#{number}\t{model.score(toks)!r}\t{len(toks)}")
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
