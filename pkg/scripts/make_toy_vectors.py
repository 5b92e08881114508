#!/usr/bin/env python3
"""Generate the 50-word, 8-dimensional toy vector fixture.

Deterministic: fixed word list, fixed seed, fixed formatting. Regenerating
must reproduce the committed file byte for byte (the test suite pins its
checksum).
"""

import sys
from pathlib import Path

import numpy as np

# every modifier lemma occurring in the fixture corpus, plus filler vocabulary
WORDS = sorted({
    "19", "accuse", "alleged", "alone", "assailant", "attack", "awful", "be",
    "child", "children", "crime", "custody", "deadliest", "deadly", "die",
    "fire", "former", "grandmother", "gunman", "horrific", "identify", "kid",
    "leave", "man", "mass", "massacre", "mourn", "murder", "nineteen", "old",
    "open", "police", "ramos", "remain", "salvador", "school", "shoot",
    "shooter", "shooting", "slaughter", "storm", "student", "suffer",
    "suspect", "teacher", "teenage", "terror", "town", "two", "young",
})

SEED = 8
DIM = 8


def main(out_path: str) -> None:
    assert len(WORDS) == 50, f"expected 50 words, got {len(WORDS)}"
    rng = np.random.default_rng(SEED)
    matrix = rng.normal(size=(len(WORDS), DIM))
    lines = [f"{len(WORDS)} {DIM}"]
    for word, row in zip(WORDS, matrix):
        lines.append(word + " " + " ".join(f"{v:.4f}" for v in row))
    Path(out_path).write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {len(WORDS)} x {DIM} vectors -> {out_path}")


if __name__ == "__main__":
    out = sys.argv[1] if len(sys.argv) > 1 else "tests/fixtures/toy_vectors_8d.txt"
    main(out)
