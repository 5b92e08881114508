"""Parsed-corpus model: CoNLL-U ingest, tree validation, metadata, token stats.

The pipeline consumes text that has already been dependency-parsed into
CoNLL-U (any parser works). This module turns that text plus a metadata
sidecar into an immutable, validated ``Corpus``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from datetime import date
from enum import Enum
from typing import Iterable, Optional

from .errors import (
    CorpusError,
    CyclicTree,
    HeadOutOfRange,
    MalformedLine,
    MissingMetadata,
    MultipleRoots,
    UnknownLeaning,
)


class Leaning(str, Enum):
    LEFT = "left"
    LEFT_CENTER = "left-center"
    RIGHT_CENTER = "right-center"
    RIGHT = "right"


LEANING_ORDER = (Leaning.LEFT, Leaning.LEFT_CENTER, Leaning.RIGHT_CENTER, Leaning.RIGHT)

#: Leanings pooled as "left" / "right" in contrast reports.
LEFT_GROUP = frozenset({Leaning.LEFT, Leaning.LEFT_CENTER})
RIGHT_GROUP = frozenset({Leaning.RIGHT_CENTER, Leaning.RIGHT})


def parse_leaning(label: str) -> Leaning:
    try:
        return Leaning(label)
    except ValueError:
        raise UnknownLeaning(label) from None


@dataclass(frozen=True)
class Token:
    """One CoNLL-U token row. ``head`` is 0 for the sentence root."""

    id: int
    form: str
    lemma: str
    upos: str
    xpos: str = "_"
    feats: str = "_"
    head: int = 0
    deprel: str = "dep"
    deps: str = "_"
    misc: dict[str, str] = field(default_factory=dict)

    @property
    def entity_tag(self) -> Optional[str]:
        return self.misc.get("Entity")

    def with_entity(self, entity: str) -> "Token":
        misc = dict(self.misc)
        misc["Entity"] = entity
        return replace(self, misc=misc)


@dataclass(frozen=True)
class Sentence:
    """A validated dependency tree plus the raw lines excluded from it.

    ``extras`` holds multiword-token ranges and empty nodes as
    ``(position, raw_line)`` where position counts regular tokens emitted
    before the line; they round-trip through serialization but take no part
    in tree validation or extraction.
    """

    sent_id: str
    text: str
    tokens: tuple[Token, ...]
    newdoc_id: Optional[str] = None
    extras: tuple[tuple[int, str], ...] = ()

    def token_by_id(self, token_id: int) -> Token:
        return self.tokens[token_id - 1]

    def children_of(self, token_id: int) -> list[Token]:
        return [t for t in self.tokens if t.head == token_id]

    def edges(self) -> list[tuple[Token, Token]]:
        """All (head, child) pairs between real tokens; the root edge to the
        virtual node 0 is not a word pair and is excluded."""
        return [(self.token_by_id(t.head), t) for t in self.tokens if t.head != 0]


@dataclass(frozen=True)
class Document:
    doc_id: str
    outlet: str
    leaning: Leaning
    sentences: tuple[Sentence, ...]
    published: Optional[str] = None


@dataclass(frozen=True)
class Corpus:
    documents: tuple[Document, ...]

    def document(self, doc_id: str) -> Document:
        for doc in self.documents:
            if doc.doc_id == doc_id:
                return doc
        raise CorpusError(f"no document {doc_id!r}")

    def token_count(self) -> int:
        return sum(len(s.tokens) for d in self.documents for s in d.sentences)


@dataclass(frozen=True)
class MetadataRecord:
    doc_id: str
    outlet: str
    leaning: Leaning
    published: Optional[str] = None


N_COLUMNS = 10


def _is_extra_id(id_field: str) -> bool:
    # multiword ranges like "3-4" and empty nodes like "3.1"
    return "-" in id_field or "." in id_field


def validate_tree(tokens: list[Token], sent_id: str, line_nos: Optional[list[int]] = None) -> None:
    """Check the shared tree invariants; raise with sentence/line context."""
    n = len(tokens)
    for i, tok in enumerate(tokens):
        line_no = line_nos[i] if line_nos else None
        if tok.id != i + 1:
            raise MalformedLine(
                f"token ids must run 1..{n}, got {tok.id} at position {i + 1}",
                sent_id=sent_id, line_no=line_no,
            )
        if tok.head < 0 or tok.head > n:
            raise HeadOutOfRange(
                f"head {tok.head} outside 0..{n}", sent_id=sent_id, line_no=line_no
            )
        if tok.head == tok.id:
            raise CyclicTree(f"token {tok.id} is its own head", sent_id=sent_id, line_no=line_no)
        if not tok.deprel or tok.deprel == "_":
            raise MalformedLine("empty deprel", sent_id=sent_id, line_no=line_no)
    roots = [t for t in tokens if t.head == 0]
    if len(roots) > 1:
        raise MultipleRoots(
            f"tokens {[t.id for t in roots]} all have head 0", sent_id=sent_id
        )
    if not roots:
        raise CyclicTree("no root token, head links must cycle", sent_id=sent_id)
    # reachability from the root covers both cycles and disconnection
    children: dict[int, list[int]] = {}
    for t in tokens:
        children.setdefault(t.head, []).append(t.id)
    seen = set()
    stack = [roots[0].id]
    while stack:
        node = stack.pop()
        if node in seen:
            raise CyclicTree(f"token {node} reached twice", sent_id=sent_id)
        seen.add(node)
        stack.extend(children.get(node, []))
    if len(seen) != n:
        raise CyclicTree(
            f"only {len(seen)} of {n} tokens reachable from the root", sent_id=sent_id
        )


def _parse_misc(misc_field: str) -> dict[str, str]:
    if misc_field == "_" or misc_field == "":
        return {}
    out: dict[str, str] = {}
    for part in misc_field.split("|"):
        if "=" in part:
            key, value = part.split("=", 1)
            out[key] = value
        else:
            out[part] = ""
    return out


def _format_misc(misc: dict[str, str]) -> str:
    if not misc:
        return "_"
    return "|".join(k if v == "" else f"{k}={v}" for k, v in misc.items())


def _parse_token_line(fields: list[str], line_no: int) -> Token:
    try:
        token_id = int(fields[0])
    except ValueError:
        raise MalformedLine(f"bad token id {fields[0]!r}", line_no=line_no) from None
    try:
        head = int(fields[6])
    except ValueError:
        raise MalformedLine(f"bad head {fields[6]!r}", line_no=line_no) from None
    form = fields[1]
    lemma = fields[2]
    if lemma == "_":
        # extraction matches on lemma, so a missing lemma falls back to the
        # lowercased surface form
        lemma = form.lower()
    return Token(
        id=token_id,
        form=form,
        lemma=lemma,
        upos=fields[3],
        xpos=fields[4],
        feats=fields[5],
        head=head,
        deprel=fields[7],
        deps=fields[8],
        misc=_parse_misc(fields[9]),
    )


def parse_conllu(text: str) -> list[Sentence]:
    """Parse CoNLL-U text into validated sentences.

    Accepts LF or CRLF input. ``# sent_id`` comments name sentences; absent
    that, a running index is used. ``# newdoc id`` markers are carried on the
    first sentence of each document for :func:`attach_metadata`.
    """
    sentences: list[Sentence] = []
    tokens: list[Token] = []
    line_nos: list[int] = []
    extras: list[tuple[int, str]] = []
    sent_id: Optional[str] = None
    text_comment: Optional[str] = None
    newdoc: Optional[str] = None
    pending_newdoc: Optional[str] = None

    def flush() -> None:
        nonlocal tokens, line_nos, extras, sent_id, text_comment, newdoc
        if not tokens and not extras:
            return
        if not tokens:
            raise MalformedLine("sentence contains only range/empty-node lines",
                                sent_id=sent_id)
        sid = sent_id if sent_id is not None else str(len(sentences) + 1)
        validate_tree(tokens, sid, line_nos)
        sentences.append(Sentence(
            sent_id=sid,
            text=text_comment if text_comment is not None else " ".join(t.form for t in tokens),
            tokens=tuple(tokens),
            newdoc_id=newdoc,
            extras=tuple(extras),
        ))
        tokens, line_nos, extras = [], [], []
        sent_id, text_comment, newdoc = None, None, None

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip("\r")
        if line.strip() == "":
            flush()
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if "=" in body:
                key, value = body.split("=", 1)
                key, value = key.strip(), value.strip()
                if key == "sent_id":
                    sent_id = value
                elif key == "text":
                    text_comment = value
                elif key == "newdoc id":
                    pending_newdoc = value
            elif body == "newdoc":
                pending_newdoc = ""
            continue
        fields = line.split("\t")
        if len(fields) != N_COLUMNS:
            raise MalformedLine(
                f"expected {N_COLUMNS} tab-separated columns, got {len(fields)}",
                sent_id=sent_id, line_no=line_no,
            )
        if pending_newdoc is not None:
            newdoc = pending_newdoc
            pending_newdoc = None
        if _is_extra_id(fields[0]):
            extras.append((len(tokens), line))
            continue
        tokens.append(_parse_token_line(fields, line_no))
        line_nos.append(line_no)
    flush()
    if pending_newdoc is not None and not sentences:
        raise MalformedLine("newdoc marker without any sentence")
    return sentences


def serialize_sentence(sentence: Sentence) -> str:
    lines = [f"# sent_id = {sentence.sent_id}", f"# text = {sentence.text}"]
    extra_at: dict[int, list[str]] = {}
    for pos, raw in sentence.extras:
        extra_at.setdefault(pos, []).append(raw)
    for i, tok in enumerate(sentence.tokens):
        for raw in extra_at.get(i, ()):
            lines.append(raw)
        lines.append("\t".join([
            str(tok.id), tok.form, tok.lemma, tok.upos, tok.xpos, tok.feats,
            str(tok.head), tok.deprel, tok.deps, _format_misc(tok.misc),
        ]))
    for raw in extra_at.get(len(sentence.tokens), ()):
        lines.append(raw)
    return "\n".join(lines) + "\n"


def serialize_conllu(sentences: Iterable[Sentence], newdoc_markers: bool = False) -> str:
    """Render sentences back to CoNLL-U text (LF line endings)."""
    blocks = []
    for sent in sentences:
        block = serialize_sentence(sent)
        if newdoc_markers and sent.newdoc_id is not None:
            block = f"# newdoc id = {sent.newdoc_id}\n" + block
        blocks.append(block)
    return "\n".join(blocks)


def load_metadata(text: str) -> list[MetadataRecord]:
    """Parse the JSON sidecar: a list of doc_id/outlet/leaning records."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CorpusError(f"metadata sidecar is not valid JSON: {exc}") from None
    if not isinstance(raw, list):
        raise CorpusError("metadata sidecar must be a JSON array")
    records = []
    for entry in raw:
        for key in ("doc_id", "outlet", "leaning"):
            if key not in entry:
                raise CorpusError(f"metadata record missing {key!r}: {entry!r}")
        if not entry["outlet"]:
            raise CorpusError(f"empty outlet in metadata record {entry['doc_id']!r}")
        published = entry.get("published")
        if published is not None:
            try:
                date.fromisoformat(published)
            except ValueError:
                raise CorpusError(
                    f"bad published date {published!r} for {entry['doc_id']!r}"
                ) from None
        records.append(MetadataRecord(
            doc_id=entry["doc_id"],
            outlet=entry["outlet"],
            leaning=parse_leaning(entry["leaning"]),
            published=published,
        ))
    return records


def attach_metadata(sentences: list[Sentence], sidecar: list[MetadataRecord]) -> Corpus:
    """Group sentences at ``newdoc`` boundaries and join the sidecar.

    A stream with no newdoc markers is treated as one document, which then
    requires exactly one sidecar record.
    """
    by_id = {rec.doc_id: rec for rec in sidecar}
    if len(by_id) != len(sidecar):
        import collections
        dupes = [d for d, c in collections.Counter(r.doc_id for r in sidecar).items() if c > 1]
        raise CorpusError(f"duplicate doc_id in sidecar: {dupes}")

    groups: list[tuple[Optional[str], list[Sentence]]] = []
    for sent in sentences:
        if sent.newdoc_id is not None or not groups:
            groups.append((sent.newdoc_id, []))
        groups[-1][1].append(sent)

    if groups and groups[0][0] is None:
        if len(groups) > 1:
            raise MissingMetadata("<sentences before first newdoc marker>")
        if len(sidecar) != 1:
            raise CorpusError(
                "stream has no newdoc markers; exactly one metadata record is required"
            )
        groups = [(sidecar[0].doc_id, groups[0][1])]

    documents = []
    seen: set[str] = set()
    for doc_id, sents in groups:
        if doc_id in seen:
            raise CorpusError(f"duplicate doc_id in stream: {doc_id!r}")
        seen.add(doc_id)
        rec = by_id.get(doc_id)
        if rec is None:
            raise MissingMetadata(doc_id)
        documents.append(Document(
            doc_id=doc_id,
            outlet=rec.outlet,
            leaning=rec.leaning,
            published=rec.published,
            # the newdoc marker's job is done once sentences live on a Document
            sentences=tuple(replace(s, newdoc_id=None) for s in sents),
        ))
    return Corpus(documents=tuple(documents))


@dataclass(frozen=True)
class CorpusStats:
    per_outlet: dict[str, int]
    total: int

    def to_dict(self) -> dict:
        return {"per_outlet": dict(sorted(self.per_outlet.items())), "total": self.total}


def corpus_stats(corpus: Corpus) -> CorpusStats:
    """Token counts per outlet. Counts every token row, punctuation included;
    multiword ranges and empty nodes are not token rows."""
    per_outlet: dict[str, int] = {}
    for doc in corpus.documents:
        n = sum(len(s.tokens) for s in doc.sentences)
        per_outlet[doc.outlet] = per_outlet.get(doc.outlet, 0) + n
    total = sum(per_outlet.values())
    return CorpusStats(per_outlet=per_outlet, total=total)


# --- JSON snapshot (the on-disk artifact between pipeline stages) ---

def token_to_dict(tok: Token) -> dict:
    return {
        "id": tok.id, "form": tok.form, "lemma": tok.lemma, "upos": tok.upos,
        "xpos": tok.xpos, "feats": tok.feats, "head": tok.head,
        "deprel": tok.deprel, "deps": tok.deps, "misc": dict(tok.misc),
    }


def corpus_to_dict(corpus: Corpus) -> dict:
    return {"documents": [
        {
            "doc_id": doc.doc_id,
            "outlet": doc.outlet,
            "leaning": doc.leaning.value,
            "published": doc.published,
            "sentences": [
                {
                    "sent_id": s.sent_id,
                    "text": s.text,
                    "tokens": [token_to_dict(t) for t in s.tokens],
                    "extras": [list(e) for e in s.extras],
                }
                for s in doc.sentences
            ],
        }
        for doc in corpus.documents
    ]}


def corpus_from_dict(data: dict) -> Corpus:
    documents = []
    for d in data["documents"]:
        sentences = []
        for s in d["sentences"]:
            tokens = [Token(
                id=t["id"], form=t["form"], lemma=t["lemma"], upos=t["upos"],
                xpos=t.get("xpos", "_"), feats=t.get("feats", "_"),
                head=t["head"], deprel=t["deprel"], deps=t.get("deps", "_"),
                misc=dict(t.get("misc", {})),
            ) for t in s["tokens"]]
            validate_tree(tokens, s["sent_id"])
            sentences.append(Sentence(
                sent_id=s["sent_id"],
                text=s["text"],
                tokens=tuple(tokens),
                extras=tuple((e[0], e[1]) for e in s.get("extras", [])),
            ))
        documents.append(Document(
            doc_id=d["doc_id"],
            outlet=d["outlet"],
            leaning=parse_leaning(d["leaning"]),
            published=d.get("published"),
            sentences=tuple(sentences),
        ))
    corpus = Corpus(documents=tuple(documents))
    ids = [doc.doc_id for doc in corpus.documents]
    if len(set(ids)) != len(ids):
        raise CorpusError("duplicate doc_ids in corpus snapshot")
    return corpus


def save_corpus(corpus: Corpus, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(corpus_to_dict(corpus), fh, ensure_ascii=False, indent=1)
        fh.write("\n")


def load_corpus(path) -> Corpus:
    with open(path, encoding="utf-8") as fh:
        return corpus_from_dict(json.load(fh))
