#!/usr/bin/env python3
"""Regenerate the golden files for the fixture corpus.

The component dump comes from the brute-force enumeration in
tests/oracles.py, not from the production extractor, and was hand-audited
once before being committed; regenerate only when the fixture corpus or the
default lexicons deliberately change, and re-audit.
"""

import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "tests"))

from oracles import oracle_extract  # noqa: E402

from sufa.aggregate import aggregate, render_table  # noqa: E402
from sufa.coref import tag_corpus  # noqa: E402
from sufa.corpus import attach_metadata, load_metadata, parse_conllu  # noqa: E402
from sufa.extraction import read_jsonl  # noqa: E402
from sufa.lexicon import default_lexicons  # noqa: E402

FIXTURES = ROOT / "tests" / "fixtures"
GOLDEN = FIXTURES / "golden"


def main() -> None:
    sentences = parse_conllu((FIXTURES / "corpus" / "news.conllu").read_text("utf-8"))
    sidecar = load_metadata((FIXTURES / "corpus" / "meta.json").read_text("utf-8"))
    corpus = attach_metadata(sentences, sidecar)
    lexicons = default_lexicons()
    corpus = tag_corpus(corpus, lexicons)

    rows = oracle_extract(corpus, lexicons)

    doc_order = {d.doc_id: i for i, d in enumerate(corpus.documents)}
    sent_order = {
        (d.doc_id, s.sent_id): j
        for d in corpus.documents
        for j, s in enumerate(d.sentences)
    }
    rows.sort(key=lambda r: (
        doc_order[r["doc_id"]],
        sent_order[(r["doc_id"], r["sent_id"])],
        r["anchor_token"],
        r["modifier_token"],
        r["entity"],
        r["relation"],
        r["direction"],
    ))

    GOLDEN.mkdir(parents=True, exist_ok=True)
    jsonl = "\n".join(json.dumps(r, ensure_ascii=False) for r in rows) + "\n"
    (GOLDEN / "components.jsonl").write_text(jsonl, encoding="utf-8", newline="\n")
    print(f"wrote {len(rows)} components -> {GOLDEN / 'components.jsonl'}")

    table = aggregate(read_jsonl(jsonl))
    md = render_table(table, "shooter", "markdown")
    (GOLDEN / "shooter_table.md").write_text(md, encoding="utf-8", newline="\n")
    print(f"wrote {GOLDEN / 'shooter_table.md'}")


if __name__ == "__main__":
    main()
