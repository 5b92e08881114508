import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import read_fixture
from oracles import oracle_token_counts

from sufa.corpus import (
    Corpus,
    Document,
    Leaning,
    MetadataRecord,
    Sentence,
    Token,
    attach_metadata,
    corpus_from_dict,
    corpus_stats,
    corpus_to_dict,
    load_metadata,
    parse_conllu,
    serialize_conllu,
    serialize_sentence,
    validate_tree,
)
from sufa.errors import (
    CorpusError,
    CyclicTree,
    HeadOutOfRange,
    MalformedLine,
    MissingMetadata,
    MultipleRoots,
    UnknownLeaning,
)


def test_minimal_one_token_sentence():
    sents = parse_conllu("1\tFire\tfire\tNOUN\t_\t_\t0\troot\t_\t_\n")
    assert len(sents) == 1
    assert len(sents[0].tokens) == 1
    tok = sents[0].tokens[0]
    assert tok.form == "Fire" and tok.lemma == "fire" and tok.head == 0


def test_head_out_of_range():
    text = (
        "1\ta\ta\tDET\t_\t_\t2\tdet\t_\t_\n"
        "2\tb\tb\tNOUN\t_\t_\t5\tnsubj\t_\t_\n"
        "3\tc\tc\tVERB\t_\t_\t0\troot\t_\t_\n"
    )
    with pytest.raises(HeadOutOfRange):
        parse_conllu(text)


def test_gold_fixture_thirteen_tokens_root_shot():
    sents = parse_conllu(read_fixture("uvalde.conllu"))
    assert len(sents) == 1
    sent = sents[0]
    assert sent.sent_id == "uvalde-1"
    assert len(sent.tokens) == 13
    roots = [t for t in sent.tokens if t.head == 0]
    assert [t.form for t in roots] == ["shot"]
    assert roots[0].lemma == "shoot"


def test_wrong_column_count():
    with pytest.raises(MalformedLine) as exc:
        parse_conllu("1\tFire\tfire\tNOUN\t_\t_\t0\troot\t_\n")
    assert "line 1" in str(exc.value)


def test_cyclic_tree():
    text = (
        "1\ta\ta\tNOUN\t_\t_\t2\tdep\t_\t_\n"
        "2\tb\tb\tNOUN\t_\t_\t1\tdep\t_\t_\n"
        "3\tc\tc\tVERB\t_\t_\t0\troot\t_\t_\n"
    )
    with pytest.raises(CyclicTree):
        parse_conllu(text)


def test_self_loop_is_cyclic():
    with pytest.raises(CyclicTree):
        parse_conllu("1\ta\ta\tNOUN\t_\t_\t1\tdep\t_\t_\n")


def test_multiple_roots():
    text = (
        "1\ta\ta\tNOUN\t_\t_\t0\troot\t_\t_\n"
        "2\tb\tb\tVERB\t_\t_\t0\troot\t_\t_\n"
    )
    with pytest.raises(MultipleRoots):
        parse_conllu(text)


def test_no_root_is_cyclic():
    text = (
        "1\ta\ta\tNOUN\t_\t_\t2\tdep\t_\t_\n"
        "2\tb\tb\tNOUN\t_\t_\t1\tdep\t_\t_\n"
    )
    with pytest.raises(CyclicTree):
        parse_conllu(text)


def test_noncontiguous_ids_rejected():
    text = (
        "1\ta\ta\tNOUN\t_\t_\t0\troot\t_\t_\n"
        "3\tb\tb\tNOUN\t_\t_\t1\tdep\t_\t_\n"
    )
    with pytest.raises(MalformedLine):
        parse_conllu(text)


def test_lemma_underscore_falls_back_to_lowercased_form():
    sents = parse_conllu("1\tGunman\t_\tNOUN\t_\t_\t0\troot\t_\t_\n")
    assert sents[0].tokens[0].lemma == "gunman"


def test_crlf_tolerated():
    text = "1\tFire\tfire\tNOUN\t_\t_\t0\troot\t_\t_\r\n\r\n"
    sents = parse_conllu(text)
    assert sents[0].tokens[0].form == "Fire"


def test_sent_id_synthesized_as_running_index():
    text = (
        "1\ta\ta\tNOUN\t_\t_\t0\troot\t_\t_\n\n"
        "1\tb\tb\tNOUN\t_\t_\t0\troot\t_\t_\n"
    )
    sents = parse_conllu(text)
    assert [s.sent_id for s in sents] == ["1", "2"]


def test_misc_entity_tags_round_trip():
    text = "1\tHe\the\tPRON\tPRP\t_\t0\troot\t_\tEntity=shooter|SpaceAfter=No\n"
    sent = parse_conllu(text)[0]
    assert sent.tokens[0].misc == {"Entity": "shooter", "SpaceAfter": "No"}
    again = parse_conllu(serialize_sentence(sent))[0]
    assert again.tokens == sent.tokens


def test_multiword_ranges_skipped_but_retained():
    sents = parse_conllu(read_fixture("mwt.conllu"))
    first = sents[0]
    assert [t.form for t in first.tokens] == ["The", "gunman", "did", "n't", "flee", "."]
    assert first.extras == ((2, "3-4\tdidn't\t_\t_\t_\t_\t_\t_\t_\t_"),)
    # empty node in the second sentence is an extra too
    assert len(sents[1].extras) == 1
    reparsed = parse_conllu(serialize_conllu(sents))
    assert [s.tokens for s in reparsed] == [s.tokens for s in sents]
    assert [s.extras for s in reparsed] == [s.extras for s in sents]


def test_round_trip_fixture_corpus():
    sents = parse_conllu(read_fixture("corpus/news.conllu"))
    again = parse_conllu(serialize_conllu(sents, newdoc_markers=True))
    assert len(again) == len(sents)
    for a, b in zip(sents, again):
        assert a.tokens == b.tokens
        assert a.sent_id == b.sent_id


# --- random tree generation for the round-trip property ---

WORD = st.text(alphabet="abcdefg'-", min_size=1, max_size=6)


@st.composite
def random_sentence(draw):
    n = draw(st.integers(min_value=1, max_value=12))
    perm = draw(st.permutations(list(range(1, n + 1))))
    heads = {perm[0]: 0}
    for i in range(1, n):
        heads[perm[i]] = perm[draw(st.integers(min_value=0, max_value=i - 1))]
    tokens = []
    for tid in range(1, n + 1):
        form = draw(WORD)
        misc = {}
        if draw(st.booleans()):
            misc["Entity"] = draw(st.sampled_from(["shooter", "victims", "event"]))
        tokens.append(Token(
            id=tid, form=form, lemma=form.lower(), upos=draw(st.sampled_from(["NOUN", "VERB", "ADJ"])),
            head=heads[tid], deprel=draw(st.sampled_from(["amod", "nsubj", "dobj", "det", "punct"])),
            misc=misc,
        ))
    return Sentence(sent_id=draw(WORD), text="x", tokens=tuple(tokens))


@settings(max_examples=200, deadline=None)
@given(random_sentence())
def test_round_trip_random_trees(sent):
    validate_tree(list(sent.tokens), sent.sent_id)
    again = parse_conllu(serialize_sentence(sent))[0]
    assert again.tokens == sent.tokens


@settings(max_examples=200, deadline=None)
@given(random_sentence())
def test_accepted_sentences_satisfy_tree_invariants(sent):
    reparsed = parse_conllu(serialize_sentence(sent))[0]
    n = len(reparsed.tokens)
    roots = [t for t in reparsed.tokens if t.head == 0]
    assert len(roots) == 1
    # exhaustive traversal: visited-node count equals n, no node seen twice
    children = {}
    for t in reparsed.tokens:
        children.setdefault(t.head, []).append(t.id)
    seen = set()
    stack = [roots[0].id]
    while stack:
        node = stack.pop()
        assert node not in seen
        seen.add(node)
        stack.extend(children.get(node, []))
    assert len(seen) == n


# --- metadata ---

def _two_doc_stream():
    return (
        "# newdoc id = d1\n"
        "1\ta\ta\tNOUN\t_\t_\t0\troot\t_\t_\n\n"
        "# newdoc id = d2\n"
        "1\tb\tb\tNOUN\t_\t_\t0\troot\t_\t_\n"
    )


def test_attach_metadata_two_docs():
    sents = parse_conllu(_two_doc_stream())
    sidecar = [
        MetadataRecord("d1", "CNN", Leaning.LEFT),
        MetadataRecord("d2", "Fox", Leaning.RIGHT),
    ]
    corpus = attach_metadata(sents, sidecar)
    assert [d.doc_id for d in corpus.documents] == ["d1", "d2"]
    assert corpus.documents[0].outlet == "CNN"
    assert corpus.documents[1].leaning is Leaning.RIGHT


def test_attach_metadata_missing_record():
    sents = parse_conllu(_two_doc_stream())
    with pytest.raises(MissingMetadata):
        attach_metadata(sents, [MetadataRecord("d1", "CNN", Leaning.LEFT)])


def test_unknown_leaning_label():
    with pytest.raises(UnknownLeaning):
        load_metadata(json.dumps([{"doc_id": "d", "outlet": "X", "leaning": "centre"}]))


def test_document_order_is_input_order(news_corpus):
    assert [d.doc_id for d in news_corpus.documents] == ["cnn-1", "nyt-1", "wsj-1", "fox-1"]


def test_duplicate_doc_ids_rejected():
    sents = parse_conllu(
        "# newdoc id = d1\n1\ta\ta\tX\t_\t_\t0\troot\t_\t_\n\n"
        "# newdoc id = d1\n1\tb\tb\tX\t_\t_\t0\troot\t_\t_\n"
    )
    with pytest.raises(CorpusError):
        attach_metadata(sents, [MetadataRecord("d1", "CNN", Leaning.LEFT)])


# --- stats ---

def test_stats_empty_corpus():
    stats = corpus_stats(Corpus(documents=()))
    assert stats.total == 0 and stats.per_outlet == {}


def test_stats_match_line_counting_oracle(news_corpus):
    raw = read_fixture("corpus/news.conllu")
    by_doc = oracle_token_counts(raw)
    outlet_of = {d.doc_id: d.outlet for d in news_corpus.documents}
    expected = {}
    for doc_id, n in by_doc.items():
        expected[outlet_of[doc_id]] = expected.get(outlet_of[doc_id], 0) + n
    stats = corpus_stats(news_corpus)
    assert stats.per_outlet == expected
    assert stats.total == sum(expected.values())


def test_stats_total_is_sum_of_outlets(news_corpus):
    stats = corpus_stats(news_corpus)
    assert stats.total == sum(stats.per_outlet.values())


def test_snapshot_round_trip(news_corpus):
    data = corpus_to_dict(news_corpus)
    again = corpus_from_dict(json.loads(json.dumps(data)))
    assert again == news_corpus
