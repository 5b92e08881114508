"""Entity tagging: keyword mentions, pronoun linking, imported chains.

Mentions are marked with an ``Entity=<name>`` entry in the token's misc
column; forms, lemmas, and tree structure are never touched, so a tagged
corpus still round-trips through CoNLL-U. Replacing a word with the entity
name would lose the surface nuance, so tagging is strictly additive.
"""

from __future__ import annotations

import json
import logging
import warnings
from dataclasses import dataclass, replace

from .corpus import Corpus, Document, Sentence, Token
from .errors import AmbiguousKeyword, BadCoordinate, SufaError
from .lexicon import EntityLexicon

logger = logging.getLogger(__name__)

#: Third-person pronouns eligible for nearest-antecedent linking, matched on
#: lemma or surface form so either lemmatization convention works.
PRONOUNS = frozenset({"he", "him", "his", "she", "her", "they", "them", "their"})

DEFAULT_WINDOW = 2


@dataclass(frozen=True)
class MentionChain:
    entity: str
    mentions: tuple[tuple[str, str, int], ...]  # (doc_id, sent_id, token id)


def load_chains(text: str) -> list[MentionChain]:
    raw = json.loads(text)
    chains = []
    for entry in raw:
        mentions = tuple(
            (m["doc_id"], m["sent_id"], int(m["token"])) for m in entry["mentions"]
        )
        if not mentions:
            raise SufaError(f"chain for {entry.get('entity')!r} has no mentions")
        chains.append(MentionChain(entity=entry["entity"], mentions=mentions))
    return chains


def _is_pronoun(tok: Token) -> bool:
    return tok.lemma.lower() in PRONOUNS or tok.form.lower() in PRONOUNS


def _keyword_entity(tok: Token, lexicons: list[EntityLexicon], reported: set[str]) -> str | None:
    matches = [lx.entity for lx in lexicons if lx.matches_token(tok)]
    if not matches:
        return None
    if len(set(matches)) > 1:
        word = tok.form.lower()
        if word not in reported:
            reported.add(word)
            warnings.warn(
                f"keyword {word!r} appears in lexicons {matches}; "
                f"using first-listed {matches[0]!r}",
                AmbiguousKeyword,
                stacklevel=4,
            )
    return matches[0]


def tag_corefs(
    document: Document,
    lexicons: list[EntityLexicon],
    window: int = DEFAULT_WINDOW,
) -> Document:
    """Tag keyword mentions, then link third-person pronouns to the nearest
    preceding tagged mention within ``window`` sentences.

    Existing ``Entity`` tags are never overwritten, which keeps imported
    chains authoritative and makes the whole pass idempotent. Pronouns are
    processed left to right, so a pronoun tagged earlier in the pass can
    serve as the antecedent of a later one.
    """
    reported: set[str] = set()
    tagged: list[list[Token]] = []
    for sent in document.sentences:
        row = []
        for tok in sent.tokens:
            if tok.entity_tag is None:
                entity = _keyword_entity(tok, lexicons, reported)
                if entity is not None:
                    tok = tok.with_entity(entity)
            row.append(tok)
        tagged.append(row)

    for si, row in enumerate(tagged):
        for ti, tok in enumerate(row):
            if tok.entity_tag is not None or not _is_pronoun(tok):
                continue
            antecedent = _nearest_antecedent(tagged, si, ti, window)
            if antecedent is not None:
                row[ti] = tok.with_entity(antecedent)

    sentences = tuple(
        replace(sent, tokens=tuple(row))
        for sent, row in zip(document.sentences, tagged)
    )
    return replace(document, sentences=sentences)


def _nearest_antecedent(
    tagged: list[list[Token]], si: int, ti: int, window: int
) -> str | None:
    for prev in range(ti - 1, -1, -1):
        entity = tagged[si][prev].entity_tag
        if entity is not None:
            return entity
    for back in range(1, window + 1):
        s = si - back
        if s < 0:
            break
        for prev in range(len(tagged[s]) - 1, -1, -1):
            entity = tagged[s][prev].entity_tag
            if entity is not None:
                return entity
    return None


def import_chains(document: Document, chains: list[MentionChain]) -> Document:
    """Apply externally produced chains to one document.

    Explicit chains win over rule-based tags; each override is logged.
    Mentions addressing other documents are left for their own pass.
    """
    wanted: dict[tuple[str, int], str] = {}
    for chain in chains:
        for doc_id, sent_id, token_id in chain.mentions:
            if doc_id == document.doc_id:
                wanted[(sent_id, token_id)] = chain.entity
    if not wanted:
        return document

    by_sent = {s.sent_id: s for s in document.sentences}
    for (sent_id, token_id), entity in wanted.items():
        sent = by_sent.get(sent_id)
        if sent is None or not (1 <= token_id <= len(sent.tokens)):
            raise BadCoordinate(document.doc_id, sent_id, token_id)

    sentences = []
    for sent in document.sentences:
        tokens = list(sent.tokens)
        changed = False
        for ti, tok in enumerate(tokens):
            entity = wanted.get((sent.sent_id, tok.id))
            if entity is None:
                continue
            if tok.entity_tag is not None and tok.entity_tag != entity:
                logger.warning(
                    "chain overrides tag %s -> %s at (%s, %s, %d)",
                    tok.entity_tag, entity, document.doc_id, sent.sent_id, tok.id,
                )
            tokens[ti] = tok.with_entity(entity)
            changed = True
        sentences.append(replace(sent, tokens=tuple(tokens)) if changed else sent)
    return replace(document, sentences=tuple(sentences))


def apply_chains(corpus: Corpus, chains: list[MentionChain]) -> Corpus:
    """Validate every chain coordinate against the corpus, then apply."""
    docs = {d.doc_id: d for d in corpus.documents}
    for chain in chains:
        for doc_id, sent_id, token_id in chain.mentions:
            doc = docs.get(doc_id)
            if doc is None:
                raise BadCoordinate(doc_id, sent_id, token_id)
            sent = next((s for s in doc.sentences if s.sent_id == sent_id), None)
            if sent is None or not (1 <= token_id <= len(sent.tokens)):
                raise BadCoordinate(doc_id, sent_id, token_id)
    return Corpus(documents=tuple(
        import_chains(doc, chains) for doc in corpus.documents
    ))


def tag_corpus(
    corpus: Corpus,
    lexicons: list[EntityLexicon],
    chains: list[MentionChain] | None = None,
    window: int = DEFAULT_WINDOW,
) -> Corpus:
    """Rule-based tagging over every document, then chain import on top."""
    tagged = Corpus(documents=tuple(
        tag_corefs(doc, lexicons, window=window) for doc in corpus.documents
    ))
    if chains:
        tagged = apply_chains(tagged, chains)
    return tagged
