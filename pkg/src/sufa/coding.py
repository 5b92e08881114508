"""Persisted coding sessions: inductive grouping of modifiers into frames.

Human coding of the extracted (modifier, relation) pairs is the route that
tends to beat clustering on small corpora, so it gets a full audit trail:
every mutation appends one history record, a pair may belong to several
groups at once, and the coverage invariant (everything is unassigned or
grouped) is re-checked after each change. Sessions persist as single JSON
files written atomically under an advisory lock.
"""

from __future__ import annotations

import fcntl
import hashlib
import json
import os
import tempfile
import warnings
from collections import Counter
from contextlib import contextmanager
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional

from .errors import (
    CodingError,
    FingerprintMismatch,
    NoComponents,
    SelfMerge,
    UnknownGroup,
    UnknownPair,
)
from .extraction import FramingComponent, write_jsonl

Pair = tuple[str, str]  # (modifier, relation)


@dataclass
class FrameGroup:
    label: str
    entity: str
    members: set[Pair] = field(default_factory=set)
    note: str = ""


@dataclass
class CodingSession:
    session_id: str
    entity: str
    groups: list[FrameGroup] = field(default_factory=list)
    unassigned: set[Pair] = field(default_factory=set)
    history: list[dict] = field(default_factory=list)
    source_fingerprint: str = ""
    pair_counts: dict[Pair, int] = field(default_factory=dict)
    stale: bool = False

    def universe(self) -> set[Pair]:
        return set(self.pair_counts)

    def group(self, label: str) -> FrameGroup:
        for g in self.groups:
            if g.label == label:
                return g
        raise UnknownGroup(label)

    def has_group(self, label: str) -> bool:
        return any(g.label == label for g in self.groups)


def components_fingerprint(components: list[FramingComponent]) -> str:
    """Hash of the canonicalized component dump a session was opened on."""
    canonical = write_jsonl(sorted(components, key=lambda c: json.dumps(c.to_dict())))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def open_session(
    components: list[FramingComponent], entity: str, session_id: Optional[str] = None
) -> CodingSession:
    pool = [c for c in components if c.entity == entity]
    if not pool:
        raise NoComponents(entity)
    counts = Counter((c.modifier, c.relation) for c in pool)
    return CodingSession(
        session_id=session_id or entity,
        entity=entity,
        unassigned=set(counts),
        source_fingerprint=components_fingerprint(pool),
        pair_counts=dict(counts),
    )


def check_fingerprint(session: CodingSession, components: list[FramingComponent]) -> bool:
    """Compare the session's fingerprint against a fresh dump; on mismatch,
    warn, mark the session stale, and return False."""
    pool = [c for c in components if c.entity == session.entity]
    if components_fingerprint(pool) != session.source_fingerprint:
        session.stale = True
        warnings.warn(
            f"session {session.session_id!r} was opened against a different "
            f"component dump; coded pairs may no longer match",
            FingerprintMismatch,
            stacklevel=2,
        )
        return False
    return True


def _check_coverage(session: CodingSession) -> None:
    covered = set(session.unassigned)
    for g in session.groups:
        covered |= g.members
    assert covered == session.universe(), (
        f"coverage broken in session {session.session_id}: "
        f"{covered ^ session.universe()}"
    )


def _record(session: CodingSession, action: str, payload: dict) -> None:
    session.history.append({
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "action": action,
        "payload": payload,
    })
    _check_coverage(session)


def assign(session: CodingSession, modifier: str, relation: str, label: str) -> CodingSession:
    """Put a pair into a group, creating the group on first use. The pair may
    stay a member of other groups; it just leaves the unassigned pool."""
    pair = (modifier, relation)
    if pair not in session.universe():
        raise UnknownPair(modifier, relation)
    if not label:
        raise CodingError("group label must be non-empty")
    if not session.has_group(label):
        session.groups.append(FrameGroup(label=label, entity=session.entity))
    session.group(label).members.add(pair)
    session.unassigned.discard(pair)
    _record(session, "assign", {"modifier": modifier, "relation": relation, "label": label})
    return session


def unassign(session: CodingSession, modifier: str, relation: str, label: str) -> CodingSession:
    """Remove a pair from one group; it returns to the unassigned pool only
    when no other group still holds it."""
    pair = (modifier, relation)
    group = session.group(label)
    if pair not in group.members:
        raise UnknownPair(modifier, relation)
    group.members.discard(pair)
    if not any(pair in g.members for g in session.groups):
        session.unassigned.add(pair)
    _record(session, "unassign", {"modifier": modifier, "relation": relation, "label": label})
    return session


def merge_groups(session: CodingSession, a: str, b: str, new_label: str) -> CodingSession:
    if a == b:
        raise SelfMerge(a)
    group_a = session.group(a)
    group_b = session.group(b)
    if not new_label:
        raise CodingError("merged group label must be non-empty")
    if session.has_group(new_label) and new_label not in (a, b):
        raise CodingError(f"group label {new_label!r} already exists")
    merged = FrameGroup(
        label=new_label,
        entity=session.entity,
        members=set(group_a.members) | set(group_b.members),
        note="\n".join(note for note in (group_a.note, group_b.note) if note),
    )
    index = min(session.groups.index(group_a), session.groups.index(group_b))
    session.groups.remove(group_a)
    session.groups.remove(group_b)
    session.groups.insert(index, merged)
    _record(session, "merge", {"a": a, "b": b, "new_label": new_label})
    return session


def set_note(session: CodingSession, label: str, note: str) -> CodingSession:
    session.group(label).note = note
    _record(session, "note", {"label": label, "note": note})
    return session


# --- serialization ---

def session_to_dict(session: CodingSession) -> dict:
    return {
        "session_id": session.session_id,
        "entity": session.entity,
        "stale": session.stale,
        "source_fingerprint": session.source_fingerprint,
        "groups": [
            {
                "label": g.label,
                "note": g.note,
                "members": [
                    {"modifier": m, "relation": r, "count": session.pair_counts.get((m, r), 0)}
                    for m, r in sorted(g.members)
                ],
            }
            for g in session.groups
        ],
        "unassigned": [
            {"modifier": m, "relation": r, "count": session.pair_counts[(m, r)]}
            for m, r in sorted(session.unassigned)
        ],
        "pair_counts": [
            {"modifier": m, "relation": r, "count": c}
            for (m, r), c in sorted(session.pair_counts.items())
        ],
        "history": list(session.history),
    }


def session_from_dict(data: dict) -> CodingSession:
    session = CodingSession(
        session_id=data["session_id"],
        entity=data["entity"],
        stale=data.get("stale", False),
        source_fingerprint=data.get("source_fingerprint", ""),
        pair_counts={
            (e["modifier"], e["relation"]): e["count"] for e in data.get("pair_counts", [])
        },
        unassigned={(e["modifier"], e["relation"]) for e in data.get("unassigned", [])},
        history=list(data.get("history", [])),
    )
    for g in data.get("groups", []):
        session.groups.append(FrameGroup(
            label=g["label"],
            entity=session.entity,
            members={(e["modifier"], e["relation"]) for e in g.get("members", [])},
            note=g.get("note", ""),
        ))
    _check_coverage(session)
    return session


def export_codebook(session: CodingSession, format: str = "json") -> str:
    """Codebook export: groups with members, counts, notes, history summary."""
    if format == "json":
        return json.dumps(session_to_dict(session), ensure_ascii=False, indent=2) + "\n"
    if format in ("markdown", "md"):
        lines = [f"# Codebook: {session.entity}", ""]
        if session.stale:
            lines += ["> Session is stale: the component dump changed since it was opened.", ""]
        for g in session.groups:
            lines.append(f"## {g.label}")
            if g.note:
                lines.append(f"> {g.note}")
            for m, r in sorted(g.members, key=lambda p: (-session.pair_counts.get(p, 0), p)):
                lines.append(f"- {m} ({r}, {session.pair_counts.get((m, r), 0)})")
            lines.append("")
        lines.append("## Unassigned")
        for m, r in sorted(session.unassigned, key=lambda p: (-session.pair_counts[p], p)):
            lines.append(f"- {m} ({r}, {session.pair_counts[(m, r)]})")
        lines.append("")
        lines.append(f"_{len(session.history)} operation(s) recorded._")
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown codebook format {format!r}")


def import_codebook(text: str) -> CodingSession:
    return session_from_dict(json.loads(text))


# --- file persistence ---

def session_path(directory, session_id: str) -> Path:
    return Path(directory) / f"{session_id}.json"


@contextmanager
def session_write_lock(directory, session_id: str):
    """Advisory single-writer lock for one session."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    lock_path = directory / f"{session_id}.lock"
    with open(lock_path, "w") as lock_fh:
        fcntl.flock(lock_fh, fcntl.LOCK_EX)
        try:
            yield
        finally:
            fcntl.flock(lock_fh, fcntl.LOCK_UN)


def save_session(session: CodingSession, directory) -> Path:
    """Atomic write-rename under the session's advisory lock."""
    directory = Path(directory)
    path = session_path(directory, session.session_id)
    with session_write_lock(directory, session.session_id):
        fd, tmp = tempfile.mkstemp(dir=directory, prefix=f".{session.session_id}.", suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
                json.dump(session_to_dict(session), fh, ensure_ascii=False, indent=2)
                fh.write("\n")
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
    return path


def load_session(directory, session_id: str) -> CodingSession:
    path = session_path(directory, session_id)
    with open(path, encoding="utf-8") as fh:
        return session_from_dict(json.load(fh))


def list_sessions(directory) -> list[str]:
    directory = Path(directory)
    if not directory.is_dir():
        return []
    return sorted(p.stem for p in directory.glob("*.json"))
