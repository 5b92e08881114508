"""Command-line pipeline: ingest -> stats/relations -> extract -> table /
contrast / cluster / suggest / serve.

Every stage reads and writes plain files (a corpus snapshot, a JSON-lines
component dump) so each step stays independently inspectable. All
diagnostics go to stderr; data goes to stdout or ``--out``. Exit codes:
0 success, 1 validation error, 2 I/O error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from .aggregate import aggregate, contrast_report, render_table
from .coref import load_chains, tag_corpus
from .corpus import (
    attach_metadata,
    corpus_stats,
    load_corpus,
    load_metadata,
    parse_conllu,
    save_corpus,
)
from .errors import SufaError
from .extraction import extract_corpus, read_jsonl, write_csv, write_jsonl
from .lexicon import (
    default_lexicons,
    load_lexicons_path,
    relation_inventory,
    suggest_keywords,
)

ENV_ENDPOINT = "SUFA_EMBED_ENDPOINT"
ENV_SESSIONS = "SUFA_SESSIONS_DIR"


class UsageError(SufaError):
    pass


class ArgumentParser(argparse.ArgumentParser):
    # validation failures exit 1; argparse's default of 2 is reserved for I/O
    def error(self, message):
        raise UsageError(message)


def _read_text(path) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _emit(text: str, out_path) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(data, out_path) -> None:
    _emit(json.dumps(data, ensure_ascii=False, indent=2) + "\n", out_path)


def _load_lexicons(path):
    if path is None:
        return default_lexicons()
    return load_lexicons_path(path)


def _pick_lexicon(lexicons, entity):
    for lx in lexicons:
        if lx.entity == entity:
            return lx
    raise UsageError(f"entity {entity!r} not in lexicon config "
                     f"(have: {', '.join(lx.entity for lx in lexicons)})")


def cmd_ingest(args) -> int:
    sentences = parse_conllu(_read_text(args.conllu))
    sidecar = load_metadata(_read_text(args.meta))
    corpus = attach_metadata(sentences, sidecar)
    lexicons = _load_lexicons(args.lexicons)
    chains = load_chains(_read_text(args.coref_chains)) if args.coref_chains else None
    corpus = tag_corpus(corpus, lexicons, chains=chains, window=args.coref_window)
    save_corpus(corpus, args.out)
    stats = corpus_stats(corpus)
    print(
        f"ingested {len(corpus.documents)} document(s), {stats.total} tokens -> {args.out}",
        file=sys.stderr,
    )
    return 0


def cmd_stats(args) -> int:
    corpus = load_corpus(args.corpus)
    _emit_json(corpus_stats(corpus).to_dict(), args.out)
    return 0


def cmd_relations(args) -> int:
    corpus = load_corpus(args.corpus)
    lexicon = _pick_lexicon(_load_lexicons(args.lexicons), args.entity)
    inventory = relation_inventory(corpus, lexicon)
    _emit_json({"entity": args.entity, "inventory": inventory}, args.out)
    return 0


def cmd_extract(args) -> int:
    corpus = load_corpus(args.corpus)
    lexicons = _load_lexicons(args.lexicons)
    components = extract_corpus(corpus, lexicons, jobs=args.jobs)
    text = write_csv(components) if args.format == "csv" else write_jsonl(components)
    _emit(text, args.out)
    print(f"extracted {len(components)} component(s)", file=sys.stderr)
    return 0


def cmd_table(args) -> int:
    table = aggregate(read_jsonl(_read_text(args.components)))
    _emit(render_table(table, args.entity, args.format), args.out)
    return 0


def cmd_contrast(args) -> int:
    table = aggregate(read_jsonl(_read_text(args.components)))
    rows = contrast_report(table, args.entity)
    _emit_json({"entity": args.entity, "rows": [r.to_dict() for r in rows]}, args.out)
    return 0


def cmd_cluster(args) -> int:
    from .clustering import cluster_components, silhouette_sweep
    from .embedding import embed_words, fetch_remote, load_vectors_path

    components = read_jsonl(_read_text(args.components))
    pool = [c for c in components if c.entity == args.entity]
    modifiers = sorted({c.modifier for c in pool})

    endpoint = args.endpoint or os.environ.get(ENV_ENDPOINT)
    if args.vectors:
        store = load_vectors_path(args.vectors)
    elif endpoint:
        store = fetch_remote(endpoint, [m.lower() for m in modifiers])
    else:
        raise UsageError("cluster needs --vectors or --endpoint "
                         f"(or the {ENV_ENDPOINT} environment variable)")

    if args.sweep:
        matrix, oov = embed_words(store, modifiers)
        in_vocab = [m for m in modifiers if m not in set(oov)]
        sweep = silhouette_sweep(in_vocab, matrix, args.seed)
        _emit_json({"entity": args.entity, "sweep": {str(k): v for k, v in sweep.items()}},
                   args.out)
        return 0

    if args.k < 1:
        raise UsageError(f"-k must be at least 1, got {args.k}")

    if args.per_relation:
        relations = sorted({c.relation for c in pool})
        reports = {}
        for rel in relations:
            distinct = len({c.modifier for c in pool if c.relation == rel})
            if distinct < args.k:
                continue
            reports[rel] = cluster_components(
                components, store, args.entity, args.k, args.seed, relation=rel
            ).to_dict()
        _emit_json({"entity": args.entity, "per_relation": reports}, args.out)
        return 0

    report = cluster_components(
        components, store, args.entity, args.k, args.seed, relation=args.relation
    )
    _emit_json(report.to_dict(), args.out)
    return 0


def cmd_suggest(args) -> int:
    from .embedding import load_vectors_path

    corpus = load_corpus(args.corpus)
    lexicon = _pick_lexicon(_load_lexicons(args.lexicons), args.entity)
    store = load_vectors_path(args.vectors)
    ranked = suggest_keywords(corpus, lexicon, store, args.n)
    _emit_json(
        {"entity": args.entity,
         "suggestions": [{"word": w, "score": s} for w, s in ranked]},
        args.out,
    )
    return 0


def cmd_serve(args) -> int:
    from .embedding import load_vectors_path
    from .server import serve

    corpus = load_corpus(args.corpus)
    lexicons = _load_lexicons(args.lexicons)
    sessions_dir = args.sessions or os.environ.get(ENV_SESSIONS)
    if sessions_dir:
        Path(sessions_dir).mkdir(parents=True, exist_ok=True)
    vectors = load_vectors_path(args.vectors) if args.vectors else None
    print(f"serving on http://{args.host}:{args.port}", file=sys.stderr)
    serve(
        corpus, lexicons,
        sessions_dir=sessions_dir,
        vectors=vectors,
        ui_dir=args.ui,
        host=args.host,
        port=args.port,
    )
    return 0


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(prog="sufa", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"sufa {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="parse CoNLL-U + metadata into a corpus snapshot")
    p.add_argument("conllu", help="CoNLL-U input file")
    p.add_argument("--meta", required=True, help="JSON metadata sidecar")
    p.add_argument("--out", required=True, help="corpus snapshot output path")
    p.add_argument("--lexicons", help="lexicon config JSON (default: packaged defaults)")
    p.add_argument("--coref-chains", help="optional JSON mention-chain file")
    p.add_argument("--coref-window", type=int, default=2,
                   help="pronoun antecedent window in sentences (default 2)")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("stats", help="token counts per outlet")
    p.add_argument("corpus")
    p.add_argument("--out")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("relations", help="relation inventory around an entity's mentions")
    p.add_argument("corpus")
    p.add_argument("--lexicons")
    p.add_argument("--entity", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_relations)

    p = sub.add_parser("extract", help="extract framing components")
    p.add_argument("corpus")
    p.add_argument("--lexicons")
    p.add_argument("--out")
    p.add_argument("--format", choices=["jsonl", "csv"], default="jsonl")
    p.add_argument("--jobs", type=int, default=max(1, os.cpu_count() or 1),
                   help="parallel workers over documents (default: available cores)")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("table", help="render an entity's frequency table")
    p.add_argument("components", help="JSON-lines component dump")
    p.add_argument("--entity", required=True)
    p.add_argument("--format", choices=["md", "markdown", "csv", "json"], default="md")
    p.add_argument("--out")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("contrast", help="left vs right counts per modifier")
    p.add_argument("components")
    p.add_argument("--entity", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_contrast)

    p = sub.add_parser("cluster", help="k-means grouping of an entity's modifiers")
    p.add_argument("components")
    p.add_argument("--entity", required=True)
    p.add_argument("--vectors", help="word-vector text file")
    p.add_argument("--endpoint", help="embedding service URL")
    p.add_argument("-k", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--relation", help="cluster only this relation's modifiers")
    p.add_argument("--per-relation", action="store_true",
                   help="cluster each relation separately")
    p.add_argument("--sweep", action="store_true",
                   help="print silhouette scores for k = 2..min(10, n-1) and exit")
    p.add_argument("--out")
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("suggest", help="embedding-neighbor keyword candidates")
    p.add_argument("corpus")
    p.add_argument("--lexicons")
    p.add_argument("--entity", required=True)
    p.add_argument("--vectors", required=True)
    p.add_argument("-n", type=int, default=10)
    p.add_argument("--out")
    p.set_defaults(func=cmd_suggest)

    p = sub.add_parser("serve", help="run the HTTP API (and optionally the UI)")
    p.add_argument("--corpus", required=True)
    p.add_argument("--lexicons")
    p.add_argument("--sessions", help=f"session directory (or {ENV_SESSIONS})")
    p.add_argument("--vectors")
    p.add_argument("--ui", help="static directory with the web UI build")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8040)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"sufa: {exc}", file=sys.stderr)
        return 1
    except SufaError as exc:
        print(f"sufa: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"sufa: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
