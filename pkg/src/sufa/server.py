"""HTTP JSON API over a loaded corpus: components, tables, contrast,
clustering, lexicon edits with re-extraction, and coding sessions.

The corpus is immutable for the lifetime of the process; lexicons and
sessions are the mutable state. Extraction results live in an immutable
snapshot swapped under a generation counter, so concurrent readers always
see one coherent extraction, never a mix of two.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Optional

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, PlainTextResponse
from pydantic import BaseModel

from . import coding
from .aggregate import FrequencyTable, aggregate, contrast_report, render_table, table_json
from .clustering import cluster_components
from .corpus import Corpus, corpus_stats
from .embedding import VectorStore
from .errors import (
    NoComponents,
    SufaError,
    UnknownEntity,
    UnknownGroup,
    UnknownPair,
)
from .extraction import FramingComponent, extract_corpus
from .lexicon import EntityLexicon, build_lexicon, lexicon_to_dict

DEFAULT_PAGE_SIZE = 200
MAX_PAGE_SIZE = 1000


class SessionNotFound(SufaError):
    def __init__(self, session_id: str):
        super().__init__(f"no session {session_id!r}")
        self.session_id = session_id


NOT_FOUND_ERRORS = (UnknownEntity, UnknownGroup, UnknownPair, NoComponents, SessionNotFound)


@dataclass(frozen=True)
class Snapshot:
    generation: int
    components: tuple[FramingComponent, ...]
    table: FrequencyTable


class AppState:
    def __init__(
        self,
        corpus: Corpus,
        lexicons: list[EntityLexicon],
        sessions_dir,
        vectors: Optional[VectorStore] = None,
    ):
        self.corpus = corpus
        self.lexicons: dict[str, EntityLexicon] = {lx.entity: lx for lx in lexicons}
        self.sessions_dir = sessions_dir
        self.vectors = vectors
        self.write_lock = threading.Lock()
        self.sessions: dict[str, coding.CodingSession] = {}
        self.session_locks: dict[str, threading.Lock] = {}
        self.sentence_text = {
            (doc.doc_id, sent.sent_id): sent.text
            for doc in corpus.documents
            for sent in doc.sentences
        }
        self.snapshot = self._extract(0)
        self._load_sessions()

    def _extract(self, generation: int) -> Snapshot:
        components = tuple(extract_corpus(self.corpus, list(self.lexicons.values())))
        return Snapshot(
            generation=generation,
            components=components,
            table=aggregate(components),
        )

    def reextract(self) -> Snapshot:
        with self.write_lock:
            snapshot = self._extract(self.snapshot.generation + 1)
            self.snapshot = snapshot
            return snapshot

    def _load_sessions(self) -> None:
        if self.sessions_dir is None:
            return
        for session_id in coding.list_sessions(self.sessions_dir):
            session = coding.load_session(self.sessions_dir, session_id)
            self.sessions[session_id] = session
            self.session_locks[session_id] = threading.Lock()

    def session_lock(self, session_id: str) -> threading.Lock:
        return self.session_locks[session_id]

    def new_session_id(self, entity: str) -> str:
        existing = set(self.sessions)
        n = 1
        while f"{entity}-{n}" in existing:
            n += 1
        return f"{entity}-{n}"


class LexiconBody(BaseModel):
    entity: Optional[str] = None
    keywords: Optional[list[str]] = None
    relations: Optional[list[str]] = None
    keyword_match: Optional[str] = None


class ClusterBody(BaseModel):
    entity: str
    k: int
    seed: int = 0
    relation: Optional[str] = None


class SessionBody(BaseModel):
    entity: str


class AssignBody(BaseModel):
    modifier: str
    relation: str
    label: str


class MergeBody(BaseModel):
    a: str
    b: str
    new_label: str


def _error_response(code: str, message: str, status: int) -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": {"code": code, "message": message}})


def _component_row(state: AppState, c: FramingComponent) -> dict:
    row = c.to_dict()
    row["text"] = state.sentence_text.get((c.doc_id, c.sent_id), "")
    return row


def create_app(
    corpus: Corpus,
    lexicons: list[EntityLexicon],
    sessions_dir=None,
    vectors: Optional[VectorStore] = None,
    ui_dir=None,
) -> FastAPI:
    state = AppState(corpus, lexicons, sessions_dir, vectors)
    app = FastAPI(title="sufa", docs_url=None, redoc_url=None)
    app.state.sufa = state

    @app.exception_handler(SufaError)
    async def sufa_error_handler(_request: Request, exc: SufaError):
        status = 404 if isinstance(exc, NOT_FOUND_ERRORS) else 400
        return _error_response(type(exc).__name__, str(exc), status)

    @app.exception_handler(RequestValidationError)
    async def validation_handler(_request: Request, exc: RequestValidationError):
        return _error_response("ValidationError", str(exc), 400)

    @app.get("/health")
    def health():
        return {"status": "ok"}

    @app.get("/stats")
    def stats():
        return corpus_stats(state.corpus).to_dict()

    @app.get("/lexicons")
    def get_lexicons():
        return {"entities": [lexicon_to_dict(lx) for lx in state.lexicons.values()]}

    def _put_lexicon(entity: str, body: LexiconBody, partial: bool) -> dict:
        if body.entity is not None and body.entity != entity:
            raise SufaError(f"body entity {body.entity!r} does not match path {entity!r}")
        with state.write_lock:
            current = state.lexicons.get(entity)
            entry = {
                "entity": entity,
                "keywords": sorted(current.keywords) if current else [],
                "relations": sorted(current.relations) if current else [],
                "keyword_match": current.keyword_match if current else "both",
            }
            if not partial:
                entry["keywords"] = body.keywords or []
                entry["relations"] = body.relations or []
                entry["keyword_match"] = body.keyword_match or "both"
            else:
                if body.keywords is not None:
                    entry["keywords"] = body.keywords
                if body.relations is not None:
                    entry["relations"] = body.relations
                if body.keyword_match is not None:
                    entry["keyword_match"] = body.keyword_match
            lexicon = build_lexicon(entry)
            state.lexicons[entity] = lexicon
            return lexicon_to_dict(lexicon)

    @app.put("/lexicons/{entity}")
    def put_lexicon(entity: str, body: LexiconBody):
        return _put_lexicon(entity, body, partial=False)

    @app.patch("/lexicons/{entity}")
    def patch_lexicon(entity: str, body: LexiconBody):
        return _put_lexicon(entity, body, partial=True)

    @app.post("/extract")
    def reextract():
        snapshot = state.reextract()
        by_entity: dict[str, int] = {}
        for c in snapshot.components:
            by_entity[c.entity] = by_entity.get(c.entity, 0) + 1
        return {
            "generation": snapshot.generation,
            "component_count": len(snapshot.components),
            "by_entity": dict(sorted(by_entity.items())),
        }

    @app.get("/components")
    def components(
        entity: Optional[str] = None,
        outlet: Optional[str] = None,
        relation: Optional[str] = None,
        modifier: Optional[str] = None,
        page: int = 1,
        page_size: int = DEFAULT_PAGE_SIZE,
    ):
        if page < 1:
            raise SufaError(f"page must be >= 1, got {page}")
        if not (1 <= page_size <= MAX_PAGE_SIZE):
            raise SufaError(f"page_size must be in 1..{MAX_PAGE_SIZE}, got {page_size}")
        snapshot = state.snapshot
        rows = [
            c for c in snapshot.components
            if (entity is None or c.entity == entity)
            and (outlet is None or c.outlet == outlet)
            and (relation is None or c.relation == relation)
            and (modifier is None or c.modifier == modifier)
        ]
        start = (page - 1) * page_size
        return {
            "generation": snapshot.generation,
            "total": len(rows),
            "page": page,
            "page_size": page_size,
            "components": [_component_row(state, c) for c in rows[start:start + page_size]],
        }

    @app.get("/tables/{entity}")
    def table(entity: str, format: str = "json"):
        snapshot = state.snapshot
        if format == "json":
            return table_json(snapshot.table, entity)
        return PlainTextResponse(render_table(snapshot.table, entity, format))

    @app.get("/contrast/{entity}")
    def contrast(entity: str):
        snapshot = state.snapshot
        rows = contrast_report(snapshot.table, entity)
        return {"entity": entity, "rows": [r.to_dict() for r in rows]}

    @app.post("/cluster")
    def cluster(body: ClusterBody):
        if state.vectors is None:
            raise SufaError("no vector store loaded; start the server with --vectors")
        snapshot = state.snapshot
        report = cluster_components(
            list(snapshot.components), state.vectors, body.entity, body.k, body.seed,
            relation=body.relation,
        )
        return report.to_dict()

    def _session_dict(session: coding.CodingSession) -> dict:
        data = coding.session_to_dict(session)
        pool = [c for c in state.snapshot.components if c.entity == session.entity]
        data["stale"] = (
            session.stale
            or coding.components_fingerprint(pool) != session.source_fingerprint
        )
        return data

    @app.get("/sessions")
    def list_sessions():
        return {"sessions": [
            {"session_id": s.session_id, "entity": s.entity, "groups": len(s.groups)}
            for s in sorted(state.sessions.values(), key=lambda s: s.session_id)
        ]}

    @app.post("/sessions")
    def create_session(body: SessionBody):
        with state.write_lock:
            snapshot = state.snapshot
            session_id = state.new_session_id(body.entity)
            session = coding.open_session(list(snapshot.components), body.entity, session_id)
            state.sessions[session_id] = session
            state.session_locks[session_id] = threading.Lock()
            if state.sessions_dir is not None:
                coding.save_session(session, state.sessions_dir)
        return _session_dict(session)

    def _get_session(session_id: str) -> coding.CodingSession:
        session = state.sessions.get(session_id)
        if session is None:
            raise SessionNotFound(session_id)
        return session

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        return _session_dict(_get_session(session_id))

    def _mutate(session_id: str, mutation) -> dict:
        session = _get_session(session_id)
        with state.session_lock(session_id):
            mutation(session)
            if state.sessions_dir is not None:
                coding.save_session(session, state.sessions_dir)
            return _session_dict(session)

    @app.post("/sessions/{session_id}/assign")
    def session_assign(session_id: str, body: AssignBody):
        return _mutate(session_id, lambda s: coding.assign(s, body.modifier, body.relation, body.label))

    @app.post("/sessions/{session_id}/unassign")
    def session_unassign(session_id: str, body: AssignBody):
        return _mutate(session_id, lambda s: coding.unassign(s, body.modifier, body.relation, body.label))

    @app.post("/sessions/{session_id}/merge")
    def session_merge(session_id: str, body: MergeBody):
        return _mutate(session_id, lambda s: coding.merge_groups(s, body.a, body.b, body.new_label))

    @app.get("/sessions/{session_id}/codebook")
    def session_codebook(session_id: str, format: str = "json"):
        session = _get_session(session_id)
        if format == "json":
            return coding.session_to_dict(session)
        return PlainTextResponse(coding.export_codebook(session, format))

    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles
        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app


def serve(
    corpus: Corpus,
    lexicons: list[EntityLexicon],
    sessions_dir=None,
    vectors: Optional[VectorStore] = None,
    ui_dir=None,
    host: str = "127.0.0.1",
    port: int = 8040,
) -> None:
    import uvicorn

    app = create_app(corpus, lexicons, sessions_dir, vectors, ui_dir)
    uvicorn.run(app, host=host, port=port, log_level="warning")
