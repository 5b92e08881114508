"""Framing-component extraction.

A framing component is a pair of words joined by one whitelisted dependency
relation, anchored at an entity mention: the mention's adjectival modifier,
its governing verb, an apposition, a compound neighbor, and so on. Each
component records which side of the edge the modifier sits on, plus enough
provenance to find the exact tokens again.
"""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable

from .corpus import Corpus, Document, Leaning, Sentence, parse_leaning
from .lexicon import EntityLexicon, matched_token_ids

#: The paired word is a child of the mention (e.g. an adjective on a noun).
MODIFIER_IS_CHILD = "modifier-is-child"
#: The paired word governs the mention (e.g. the verb of a subject mention).
MODIFIER_IS_HEAD = "modifier-is-head"

COMPONENT_FIELDS = (
    "entity", "anchor", "modifier", "relation", "direction",
    "doc_id", "sent_id", "outlet", "leaning", "anchor_token", "modifier_token",
)


@dataclass(frozen=True)
class FramingComponent:
    entity: str
    anchor: str          # lemma of the mention token
    modifier: str        # lemma of the paired word
    relation: str
    direction: str
    doc_id: str
    sent_id: str
    outlet: str
    leaning: Leaning
    anchor_token: int
    modifier_token: int

    def to_dict(self) -> dict:
        return {
            "entity": self.entity,
            "anchor": self.anchor,
            "modifier": self.modifier,
            "relation": self.relation,
            "direction": self.direction,
            "doc_id": self.doc_id,
            "sent_id": self.sent_id,
            "outlet": self.outlet,
            "leaning": self.leaning.value,
            "anchor_token": self.anchor_token,
            "modifier_token": self.modifier_token,
        }

    @staticmethod
    def from_dict(data: dict) -> "FramingComponent":
        return FramingComponent(
            entity=data["entity"],
            anchor=data["anchor"],
            modifier=data["modifier"],
            relation=data["relation"],
            direction=data["direction"],
            doc_id=data["doc_id"],
            sent_id=data["sent_id"],
            outlet=data["outlet"],
            leaning=parse_leaning(data["leaning"]),
            anchor_token=int(data["anchor_token"]),
            modifier_token=int(data["modifier_token"]),
        )


@dataclass(frozen=True)
class DocumentMeta:
    doc_id: str
    outlet: str
    leaning: Leaning

    @staticmethod
    def of(document: Document) -> "DocumentMeta":
        return DocumentMeta(document.doc_id, document.outlet, document.leaning)


def match_mentions(sentence: Sentence, lexicon: EntityLexicon) -> list[int]:
    """Token ids mentioning the entity, by keyword or coreference tag."""
    return sorted(matched_token_ids(sentence, lexicon))


def extract_components(
    sentence: Sentence,
    mentions: list[int],
    lexicon: EntityLexicon,
    meta: DocumentMeta,
) -> list[FramingComponent]:
    """Pair each mention with every incident whitelisted edge.

    Only directly incident edges qualify: a component is one word pair, one
    relation, so e.g. an adverb on the mention's verb belongs to the verb,
    not to the entity. A mention matched both by keyword and by tag still
    yields each edge once. The paired word is recorded as its lemma; for
    clausal relations on a participle that is simply the verb's lemma.
    """
    out: list[FramingComponent] = []
    mention_set = set(mentions)
    for m in sorted(mention_set):
        tok = sentence.token_by_id(m)
        for child in sentence.children_of(m):
            if child.deprel in lexicon.relations:
                out.append(FramingComponent(
                    entity=lexicon.entity,
                    anchor=tok.lemma,
                    modifier=child.lemma,
                    relation=child.deprel,
                    direction=MODIFIER_IS_CHILD,
                    doc_id=meta.doc_id,
                    sent_id=sentence.sent_id,
                    outlet=meta.outlet,
                    leaning=meta.leaning,
                    anchor_token=m,
                    modifier_token=child.id,
                ))
        if tok.head != 0 and tok.deprel in lexicon.relations:
            head = sentence.token_by_id(tok.head)
            out.append(FramingComponent(
                entity=lexicon.entity,
                anchor=tok.lemma,
                modifier=head.lemma,
                relation=tok.deprel,
                direction=MODIFIER_IS_HEAD,
                doc_id=meta.doc_id,
                sent_id=sentence.sent_id,
                outlet=meta.outlet,
                leaning=meta.leaning,
                anchor_token=m,
                modifier_token=tok.head,
            ))
    out.sort(key=_component_order)
    return out


def _component_order(c: FramingComponent):
    return (c.anchor_token, c.modifier_token, c.entity, c.relation, c.direction)


def extract_document(
    document: Document, lexicons: list[EntityLexicon]
) -> list[FramingComponent]:
    meta = DocumentMeta.of(document)
    out: list[FramingComponent] = []
    for sent in document.sentences:
        per_sentence: list[FramingComponent] = []
        for lexicon in lexicons:
            mentions = match_mentions(sent, lexicon)
            if mentions:
                per_sentence.extend(extract_components(sent, mentions, lexicon, meta))
        per_sentence.sort(key=_component_order)
        out.extend(per_sentence)
    return out


def extract_corpus(
    corpus: Corpus, lexicons: list[EntityLexicon], jobs: int = 1
) -> list[FramingComponent]:
    """Extraction over every document, in document order.

    Documents are independent, so ``jobs > 1`` fans them out to worker
    processes; the merged output order is identical either way.
    """
    if jobs > 1 and len(corpus.documents) > 1:
        with ProcessPoolExecutor(max_workers=min(jobs, len(corpus.documents))) as pool:
            results = pool.map(_extract_document_star, [
                (doc, lexicons) for doc in corpus.documents
            ])
            out: list[FramingComponent] = []
            for chunk in results:
                out.extend(chunk)
            return out
    out = []
    for doc in corpus.documents:
        out.extend(extract_document(doc, lexicons))
    return out


def _extract_document_star(args) -> list[FramingComponent]:
    return extract_document(*args)


# --- component dumps ---

def write_jsonl(components: Iterable[FramingComponent]) -> str:
    lines = [json.dumps(c.to_dict(), ensure_ascii=False) for c in components]
    return "\n".join(lines) + ("\n" if lines else "")


def read_jsonl(text: str) -> list[FramingComponent]:
    out = []
    for line in text.splitlines():
        line = line.strip()
        if line:
            out.append(FramingComponent.from_dict(json.loads(line)))
    return out


def write_csv(components: Iterable[FramingComponent]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=COMPONENT_FIELDS, lineterminator="\n")
    writer.writeheader()
    for c in components:
        writer.writerow(c.to_dict())
    return buf.getvalue()


def read_csv(text: str) -> list[FramingComponent]:
    reader = csv.DictReader(io.StringIO(text))
    return [FramingComponent.from_dict(row) for row in reader]
