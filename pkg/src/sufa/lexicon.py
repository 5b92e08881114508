"""Entity lexicons: keyword lists plus dependency-relation whitelists.

A lexicon defines one target entity by the words that mention it and the
relations whose edges count as attributions of it. The packaged default
config covers three entities (shooter, victims, event) for gun-violence
coverage; configs are plain JSON and fully editable.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from importlib import resources
from typing import Optional

from .corpus import Corpus, Sentence
from .errors import (
    EmptyKeywordSet,
    LexiconError,
    NoVectorsForEntity,
    UnknownRelationWarning,
)

#: Accepted spellings for relation labels that appear in the wild.
RELATION_ALIASES = {"relc": "relcl"}

#: Universal Dependencies v2 relations plus the legacy ClearNLP-style labels
#: many English parsers still emit. Relations outside this inventory load
#: with a warning, not a failure.
KNOWN_RELATIONS = frozenset({
    # UD v2 universal
    "acl", "advcl", "advmod", "amod", "appos", "aux", "case", "cc", "ccomp",
    "clf", "compound", "conj", "cop", "csubj", "dep", "det", "discourse",
    "dislocated", "expl", "fixed", "flat", "goeswith", "iobj", "list", "mark",
    "nmod", "nsubj", "nummod", "obj", "obl", "orphan", "parataxis", "punct",
    "reparandum", "root", "vocative", "xcomp",
    # common subtypes
    "acl:relcl", "aux:pass", "cc:preconj", "compound:prt", "csubj:pass",
    "det:predet", "flat:foreign", "flat:name", "nmod:npmod", "nmod:poss",
    "nmod:tmod", "nsubj:pass", "obl:agent", "obl:npmod", "obl:tmod",
    # legacy / ClearNLP-style labels
    "acomp", "agent", "attr", "auxpass", "complm", "csubjpass", "dative",
    "dobj", "hmod", "hyph", "infmod", "intj", "meta", "neg", "nn",
    "npadvmod", "nsubjpass", "num", "number", "oprd", "partmod", "pcomp",
    "pobj", "poss", "possessive", "preconj", "predet", "prep", "prt",
    "quantmod", "rcmod", "relcl",
})

KEYWORD_MATCH_MODES = ("lemma", "form", "both")

#: misc key carrying entity tags on tokens.
ENTITY_MISC_KEY = "Entity"


def normalize_relation(rel: str) -> str:
    rel = rel.strip().lower()
    return RELATION_ALIASES.get(rel, rel)


@dataclass(frozen=True)
class EntityLexicon:
    entity: str
    keywords: frozenset[str]
    relations: frozenset[str]
    keyword_match: str = "both"

    def matches_token(self, token) -> bool:
        """Keyword match on lemma and/or surface form, case-insensitive."""
        if self.keyword_match in ("lemma", "both") and token.lemma.lower() in self.keywords:
            return True
        if self.keyword_match in ("form", "both") and token.form.lower() in self.keywords:
            return True
        return False


def matched_token_ids(sentence: Sentence, lexicon: EntityLexicon) -> set[int]:
    """Ids of tokens mentioning the entity: keyword matches plus tokens
    carrying this entity's coreference tag."""
    out = set()
    for tok in sentence.tokens:
        if lexicon.matches_token(tok) or tok.entity_tag == lexicon.entity:
            out.add(tok.id)
    return out


def build_lexicon(entry: dict) -> EntityLexicon:
    entity = entry.get("entity", "")
    if not entity:
        raise LexiconError(f"lexicon entry without an entity name: {entry!r}")
    keywords = [str(k).strip().lower() for k in entry.get("keywords", [])]
    keywords = [k for k in keywords if k]
    if not keywords:
        raise EmptyKeywordSet(entity)
    relations = [normalize_relation(r) for r in entry.get("relations", [])]
    relations = [r for r in relations if r]
    if not relations:
        raise LexiconError(f"entity {entity!r} has an empty relation set")
    for rel in relations:
        if rel not in KNOWN_RELATIONS:
            warnings.warn(
                f"entity {entity!r} whitelists unrecognized relation {rel!r}",
                UnknownRelationWarning,
                stacklevel=3,
            )
    keyword_match = entry.get("keyword_match", "both")
    if keyword_match not in KEYWORD_MATCH_MODES:
        raise LexiconError(
            f"entity {entity!r}: keyword_match must be one of {KEYWORD_MATCH_MODES}"
        )
    return EntityLexicon(
        entity=entity,
        keywords=frozenset(keywords),
        relations=frozenset(relations),
        keyword_match=keyword_match,
    )


def load_lexicons(text: str) -> list[EntityLexicon]:
    """Load lexicons from the JSON config: {"entities": [{entity, keywords,
    relations, keyword_match}, ...]}. Nothing is defaulted silently."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise LexiconError(f"lexicon config is not valid JSON: {exc}") from None
    if not isinstance(raw, dict) or "entities" not in raw:
        raise LexiconError('lexicon config must be an object with an "entities" list')
    lexicons = [build_lexicon(entry) for entry in raw["entities"]]
    names = [lx.entity for lx in lexicons]
    if len(set(names)) != len(names):
        raise LexiconError(f"duplicate entity names in config: {names}")
    return lexicons


def serialize_lexicons(lexicons: list[EntityLexicon]) -> str:
    return json.dumps(
        {"entities": [lexicon_to_dict(lx) for lx in lexicons]},
        ensure_ascii=False,
        indent=2,
    ) + "\n"


def lexicon_to_dict(lx: EntityLexicon) -> dict:
    return {
        "entity": lx.entity,
        "keywords": sorted(lx.keywords),
        "relations": sorted(lx.relations),
        "keyword_match": lx.keyword_match,
    }


def load_lexicons_path(path) -> list[EntityLexicon]:
    with open(path, encoding="utf-8") as fh:
        return load_lexicons(fh.read())


def default_lexicons() -> list[EntityLexicon]:
    """The packaged shooter/victims/event defaults."""
    text = resources.files("sufa.data").joinpath("default_lexicons.json").read_text("utf-8")
    return load_lexicons(text)


def relation_inventory(corpus: Corpus, lexicon: EntityLexicon) -> dict[str, int]:
    """Count deprel labels on every tree edge incident to a matched token.

    The whitelist is deliberately ignored: this is the review artifact used
    to decide which relations belong on the whitelist in the first place.
    Each edge counts once even when both endpoints are matched.
    """
    counts: dict[str, int] = {}
    for doc in corpus.documents:
        for sent in doc.sentences:
            matched = matched_token_ids(sent, lexicon)
            if not matched:
                continue
            for tok in sent.tokens:
                if tok.head == 0:
                    continue
                if tok.id in matched or tok.head in matched:
                    counts[tok.deprel] = counts.get(tok.deprel, 0) + 1
    return dict(sorted(counts.items()))


def suggest_keywords(
    corpus: Corpus,
    lexicon: EntityLexicon,
    store,
    n: int,
    pos_tags: tuple[str, ...] = ("NOUN", "PROPN"),
) -> list[tuple[str, float]]:
    """Rank corpus nouns by their best cosine similarity to any existing
    keyword. Candidates already in the keyword set are excluded; ties break
    lexicographically so the ranking is reproducible."""
    from .embedding import cosine

    if n <= 0:
        return []
    keyword_vecs = [store.vectors[k] for k in sorted(lexicon.keywords) if k in store.vectors]
    if not keyword_vecs:
        raise NoVectorsForEntity(lexicon.entity)
    candidates: set[str] = set()
    for doc in corpus.documents:
        for sent in doc.sentences:
            for tok in sent.tokens:
                if tok.upos in pos_tags:
                    candidates.add(tok.lemma.lower())
    candidates -= lexicon.keywords
    scored = []
    for word in candidates:
        vec = store.vectors.get(word)
        if vec is None:
            continue
        best = max(cosine(vec, kv) for kv in keyword_vecs)
        scored.append((word, best))
    scored.sort(key=lambda pair: (-pair[1], pair[0]))
    return scored[:n]
