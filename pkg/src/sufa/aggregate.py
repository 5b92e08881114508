"""Frequency tables and left/right contrast reports over component lists."""

from __future__ import annotations

import csv
import io
import json
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Optional

from .corpus import LEANING_ORDER, LEFT_GROUP, RIGHT_GROUP, Leaning
from .errors import UnknownEntity
from .extraction import FramingComponent

#: (entity, outlet, leaning value, relation, modifier)
Key = tuple[str, str, str, str, str]

KEY_FIELDS = ("entity", "outlet", "leaning", "relation", "modifier")


@dataclass(frozen=True)
class FrequencyTable:
    entries: dict[Key, int]

    def total(self) -> int:
        return sum(self.entries.values())

    def entities(self) -> list[str]:
        return sorted({key[0] for key in self.entries})

    def marginal(self, *dims: str) -> dict[tuple[str, ...], int]:
        """Collapse the table onto a subset of key fields."""
        idx = [KEY_FIELDS.index(d) for d in dims]
        out: Counter = Counter()
        for key, count in self.entries.items():
            out[tuple(key[i] for i in idx)] += count
        return dict(out)

    def for_entity(self, entity: str) -> dict[Key, int]:
        if self.entries and entity not in {k[0] for k in self.entries}:
            raise UnknownEntity(entity)
        return {k: v for k, v in self.entries.items() if k[0] == entity}


def aggregate(components: Iterable[FramingComponent]) -> FrequencyTable:
    """Exact multiset counting of (entity, outlet, leaning, relation, modifier)."""
    components = list(components)
    counts: Counter = Counter(
        (c.entity, c.outlet, c.leaning.value, c.relation, c.modifier)
        for c in components
    )
    table = FrequencyTable(entries=dict(counts))
    assert table.total() == len(components), "aggregation must conserve counts"
    return table


def _row_groups(entries: dict[Key, int]) -> list[tuple[str, str, dict[str, list[tuple[str, int]]]]]:
    """Rows as (leaning value, outlet, {relation: [(modifier, count), ...]}),
    ordered left to right and alphabetically within a leaning; modifiers by
    descending count then lexicographic."""
    by_row: dict[tuple[str, str], dict[str, dict[str, int]]] = {}
    for (_, outlet, leaning, relation, modifier), count in entries.items():
        row = by_row.setdefault((leaning, outlet), {})
        row.setdefault(relation, {})[modifier] = count
    order = {leaning.value: i for i, leaning in enumerate(LEANING_ORDER)}
    rows = []
    for (leaning, outlet) in sorted(by_row, key=lambda k: (order[k[0]], k[1])):
        cells = {
            rel: sorted(mods.items(), key=lambda mc: (-mc[1], mc[0]))
            for rel, mods in sorted(by_row[(leaning, outlet)].items())
        }
        rows.append((leaning, outlet, cells))
    return rows


def _display_leaning(value: str) -> str:
    return value[0].upper() + value[1:]


def _md_escape(value: str) -> str:
    # a bare pipe would split the table cell
    return value.replace("|", "\\|")


def render_table(ft: FrequencyTable, entity: str, format: str = "markdown") -> str:
    """Render one entity's table.

    Markdown mirrors the report layout: one row per outlet, grouped cells
    like ``amod: old (21), active (3); nsubj: shoot (2)`` with relations in
    alphabetical order. CSV emits one row per counted pair. JSON nests
    entity > outlet > relation > {modifier: count}.
    """
    entries = ft.for_entity(entity)
    rows = _row_groups(entries)
    if format in ("markdown", "md"):
        lines = ["| Leaning | Outlet | Components |", "| --- | --- | --- |"]
        for leaning, outlet, cells in rows:
            parts = [
                f"{_md_escape(rel)}: "
                + ", ".join(f"{_md_escape(mod)} ({count})" for mod, count in mods)
                for rel, mods in cells.items()
            ]
            lines.append(
                f"| {_display_leaning(leaning)} | {_md_escape(outlet)} | {'; '.join(parts)} |"
            )
        return "\n".join(lines) + "\n"
    if format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["entity", "outlet", "leaning", "relation", "modifier", "count"])
        for leaning, outlet, cells in rows:
            for rel, mods in cells.items():
                for mod, count in mods:
                    writer.writerow([entity, outlet, leaning, rel, mod, count])
        return buf.getvalue()
    if format == "json":
        return json.dumps(table_json(ft, entity), ensure_ascii=False, indent=2) + "\n"
    raise ValueError(f"unknown table format {format!r}")


def table_json(ft: FrequencyTable, entity: str) -> dict:
    entries = ft.for_entity(entity)
    nested: dict[str, dict[str, dict[str, int]]] = {}
    for _, outlet, cells in _row_groups(entries):
        nested[outlet] = {rel: dict(mods) for rel, mods in cells.items()}
    return {entity: nested}


@dataclass(frozen=True)
class ContrastRow:
    modifier: str
    relation: str
    left: int
    right: int

    @property
    def delta(self) -> int:
        return self.left - self.right

    def to_dict(self) -> dict:
        return {
            "modifier": self.modifier,
            "relation": self.relation,
            "left": self.left,
            "right": self.right,
            "delta": self.delta,
        }


LEFT_VALUES = frozenset(l.value for l in LEFT_GROUP)
RIGHT_VALUES = frozenset(l.value for l in RIGHT_GROUP)


def contrast_report(ft: FrequencyTable, entity: str) -> list[ContrastRow]:
    """Per-(modifier, relation) counts pooled into left (left + left-center)
    vs right (right-center + right), ranked by absolute difference."""
    entries = ft.for_entity(entity)
    left: Counter = Counter()
    right: Counter = Counter()
    pairs = set()
    for (_, _, leaning, relation, modifier), count in entries.items():
        pairs.add((modifier, relation))
        if leaning in LEFT_VALUES:
            left[(modifier, relation)] += count
        else:
            right[(modifier, relation)] += count
    rows = [
        ContrastRow(modifier=mod, relation=rel, left=left[(mod, rel)], right=right[(mod, rel)])
        for mod, rel in pairs
    ]
    rows.sort(key=lambda r: (-abs(r.delta), r.modifier, r.relation))
    return rows
