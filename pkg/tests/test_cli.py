import json
import subprocess
import sys
from pathlib import Path

import pytest

from conftest import FIXTURES, read_fixture

from sufa.aggregate import aggregate, contrast_report, render_table
from sufa.cli import main
from sufa.coref import tag_corpus
from sufa.corpus import attach_metadata, load_corpus, load_metadata, parse_conllu
from sufa.extraction import extract_corpus, write_jsonl
from sufa.lexicon import default_lexicons

CORPUS_CONLLU = FIXTURES / "corpus" / "news.conllu"
CORPUS_META = FIXTURES / "corpus" / "meta.json"


def run(argv, capsys):
    code = main([str(a) for a in argv])
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture()
def snapshot(tmp_path, capsys):
    out = tmp_path / "corpus.json"
    code, _, err = run(["ingest", CORPUS_CONLLU, "--meta", CORPUS_META, "--out", out], capsys)
    assert code == 0, err
    return out


def test_ingest_writes_snapshot(snapshot):
    corpus = load_corpus(snapshot)
    assert [d.doc_id for d in corpus.documents] == ["cnn-1", "nyt-1", "wsj-1", "fox-1"]
    he = corpus.document("cnn-1").sentences[1].tokens[0]
    assert he.entity_tag == "shooter"


def test_stats_output(snapshot, capsys):
    code, out, _ = run(["stats", snapshot], capsys)
    assert code == 0
    data = json.loads(out)
    assert data["total"] == sum(data["per_outlet"].values()) == 113


def test_relations_inventory(snapshot, capsys):
    code, out, _ = run(["relations", snapshot, "--entity", "victims"], capsys)
    assert code == 0
    inventory = json.loads(out)["inventory"]
    assert inventory["cc"] == 2  # conjoined keywords in two fixtures


def test_extract_matches_golden(snapshot, tmp_path, capsys):
    out = tmp_path / "components.jsonl"
    code, _, _ = run(["extract", snapshot, "--out", out], capsys)
    assert code == 0
    assert out.read_text(encoding="utf-8") == read_fixture("golden/components.jsonl")


def test_table_markdown_matches_golden(snapshot, tmp_path, capsys):
    comps = tmp_path / "components.jsonl"
    run(["extract", snapshot, "--out", comps], capsys)
    code, out, _ = run(["table", comps, "--entity", "shooter", "--format", "md"], capsys)
    assert code == 0
    assert out == read_fixture("golden/shooter_table.md")


def test_contrast_output(snapshot, tmp_path, capsys):
    comps = tmp_path / "components.jsonl"
    run(["extract", snapshot, "--out", comps], capsys)
    code, out, _ = run(["contrast", comps, "--entity", "victims"], capsys)
    assert code == 0
    rows = json.loads(out)["rows"]
    assert rows[0] == {"modifier": "young", "relation": "amod",
                       "left": 5, "right": 0, "delta": 5}


def test_pipeline_equals_in_process_run(snapshot, tmp_path, capsys):
    comps_path = tmp_path / "components.jsonl"
    run(["extract", snapshot, "--out", comps_path], capsys)
    code, table_out, _ = run(
        ["table", comps_path, "--entity", "victims", "--format", "json"], capsys
    )
    assert code == 0

    sentences = parse_conllu(CORPUS_CONLLU.read_text("utf-8"))
    corpus = attach_metadata(sentences, load_metadata(CORPUS_META.read_text("utf-8")))
    corpus = tag_corpus(corpus, default_lexicons())
    components = extract_corpus(corpus, default_lexicons())
    assert comps_path.read_text("utf-8") == write_jsonl(components)
    table = aggregate(components)
    assert table_out == render_table(table, "victims", "json")
    code, contrast_out, _ = run(["contrast", comps_path, "--entity", "victims"], capsys)
    expected = {"entity": "victims",
                "rows": [r.to_dict() for r in contrast_report(table, "victims")]}
    assert json.loads(contrast_out) == expected


def test_cluster_with_vectors(snapshot, tmp_path, capsys):
    comps = tmp_path / "components.jsonl"
    run(["extract", snapshot, "--out", comps], capsys)
    code, out, _ = run([
        "cluster", comps, "--entity", "victims",
        "--vectors", FIXTURES / "toy_vectors_8d.txt", "-k", "2", "--seed", "5",
    ], capsys)
    assert code == 0
    report = json.loads(out)
    assert report["k"] == 2 and report["seed"] == 5
    assert report["oov"] == []


def test_cluster_k_zero_exit_one(snapshot, tmp_path, capsys):
    comps = tmp_path / "components.jsonl"
    run(["extract", snapshot, "--out", comps], capsys)
    code, _, err = run([
        "cluster", comps, "--entity", "victims",
        "--vectors", FIXTURES / "toy_vectors_8d.txt", "-k", "0",
    ], capsys)
    assert code == 1
    assert "at least 1" in err


def test_cluster_sweep(snapshot, tmp_path, capsys):
    comps = tmp_path / "components.jsonl"
    run(["extract", snapshot, "--out", comps], capsys)
    code, out, _ = run([
        "cluster", comps, "--entity", "victims",
        "--vectors", FIXTURES / "toy_vectors_8d.txt", "--sweep",
    ], capsys)
    assert code == 0
    sweep = json.loads(out)["sweep"]
    assert all(-1.0 <= v <= 1.0 for v in sweep.values())


def test_cluster_per_relation(snapshot, tmp_path, capsys):
    comps = tmp_path / "components.jsonl"
    run(["extract", snapshot, "--out", comps], capsys)
    code, out, _ = run([
        "cluster", comps, "--entity", "victims",
        "--vectors", FIXTURES / "toy_vectors_8d.txt", "-k", "2", "--per-relation",
    ], capsys)
    assert code == 0
    per_relation = json.loads(out)["per_relation"]
    assert "amod" in per_relation


def test_suggest(capsys, tmp_path):
    corpus_path = tmp_path / "sugg.json"
    meta = tmp_path / "meta.json"
    meta.write_text(json.dumps([{"doc_id": "1", "outlet": "CNN", "leaning": "left"}]))
    code, _, _ = run(["ingest", FIXTURES / "suggest.conllu", "--meta", meta,
                      "--out", corpus_path], capsys)
    assert code == 0
    code, out, _ = run([
        "suggest", corpus_path, "--entity", "shooter",
        "--vectors", FIXTURES / "suggest_vectors.txt", "-n", "1",
    ], capsys)
    assert code == 0
    assert [s["word"] for s in json.loads(out)["suggestions"]] == ["assailant"]


def test_missing_file_exit_two(capsys):
    code, _, err = run(["stats", "/nonexistent/corpus.json"], capsys)
    assert code == 2
    assert err


def test_unknown_entity_exit_one(snapshot, capsys):
    code, _, err = run(["relations", snapshot, "--entity", "nobody"], capsys)
    assert code == 1
    assert "nobody" in err


def test_bad_flag_exit_one(capsys):
    code, _, err = run(["extract"], capsys)
    assert code == 1


def test_ingest_with_chains(tmp_path, capsys):
    out = tmp_path / "corpus.json"
    code, _, _ = run([
        "ingest", CORPUS_CONLLU, "--meta", CORPUS_META, "--out", out,
        "--coref-chains", FIXTURES / "corpus" / "chains.json",
    ], capsys)
    assert code == 0
    corpus = load_corpus(out)
    his = corpus.document("wsj-1").sentences[0].tokens[9]
    assert his.entity_tag == "shooter"


def test_csv_format_extract(snapshot, tmp_path, capsys):
    out = tmp_path / "components.csv"
    code, _, _ = run(["extract", snapshot, "--out", out, "--format", "csv"], capsys)
    assert code == 0
    header = out.read_text("utf-8").splitlines()[0]
    assert header.startswith("entity,anchor,modifier,relation,direction")


def test_console_entry_point_runs():
    result = subprocess.run(
        [sys.executable, "-m", "sufa.cli", "--version"],
        capture_output=True, text=True,
    )
    assert result.returncode == 0
    assert "sufa" in result.stdout
