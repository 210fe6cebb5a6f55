"""Facet grouping of search results and their import into the mindmap.

Results can be grouped by publication date, forum or author, or by a regular
expression over any record field (the first capture group labels the group).
Selected records become small subtrees: a topic node titled after the paper
with link/detail children for the url, the abstract and each piece of
supporting material. Re-importing the same record under the same target is
a no-op, keyed on the record url.
"""

from __future__ import annotations

import re
import uuid
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from .cleaning import PublicationRecord
from .errors import InvalidRegex
from .mindmap import Mindmap, MindmapNode, attach_subtree
from .orchestrator import MaterialKind, SupportMaterial

FIELD_FACETS = ("date", "forum", "author")

OTHER_LABEL = "other"


@dataclass
class FacetSpec:
    """Either a plain field facet or a (field, regex) facet."""

    field: str
    pattern: Optional[str] = None

    def __post_init__(self):
        if self.pattern is None:
            if self.field not in FIELD_FACETS:
                raise ValueError(f"field facet must be one of {FIELD_FACETS}, got {self.field!r}")
        else:
            if self.field not in PublicationRecord.__dataclass_fields__:
                raise ValueError(f"{self.field!r} is not a record field")
            try:
                self._compiled = re.compile(self.pattern)
            except re.error as exc:
                raise InvalidRegex(f"bad pattern {self.pattern!r}: {exc}") from exc


@dataclass
class ResultGroup:
    label: str
    records: list[PublicationRecord]


def _field_text(record: PublicationRecord, field_name: str) -> str:
    value = getattr(record, field_name)
    if value is None:
        return ""
    if isinstance(value, (list, tuple)):
        return "; ".join(str(v) for v in value)
    return str(value)


def _forum_label(record: PublicationRecord) -> str:
    if record.venue_norm is not None:
        return record.venue_norm[0]
    if record.venue_raw.strip():
        return record.venue_raw.strip()
    return OTHER_LABEL


def group_results(records: Sequence[PublicationRecord], facet: FacetSpec) -> list[ResultGroup]:
    """Group records under facet labels, sorted lexicographically by label.

    Records keep their input order inside each group. With the author facet
    a record appears once per author; every other facet partitions the
    records, the leftovers landing under "other".
    """
    grouped: dict[str, list[PublicationRecord]] = {}

    def add(label: str, record: PublicationRecord) -> None:
        grouped.setdefault(label, []).append(record)

    for record in records:
        if facet.pattern is not None:
            m = facet._compiled.search(_field_text(record, facet.field))
            if m is None:
                add(OTHER_LABEL, record)
            else:
                add(m.group(1) if m.groups() else m.group(0), record)
        elif facet.field == "date":
            add(str(record.date) if record.date is not None else OTHER_LABEL, record)
        elif facet.field == "forum":
            add(_forum_label(record), record)
        else:  # author
            if record.authors:
                for author in record.authors:
                    add(author, record)
            else:
                add(OTHER_LABEL, record)

    return [ResultGroup(label=label, records=grouped[label]) for label in sorted(grouped)]


def _default_id_factory() -> str:
    return f"imp_{uuid.uuid4().hex[:12]}"


def build_mm_subtree(record: PublicationRecord,
                     materials: Sequence[SupportMaterial] = (),
                     id_factory: Callable[[], str] = _default_id_factory) -> MindmapNode:
    """Build the mindmap subtree representing one imported result.

    Root topic node carries the title; children are, in order: a link node
    for the record url, a detail node for the abstract, then one node per
    support material (link nodes, except abstracts which become details).
    """
    if not record.title:
        raise ValueError("record title must be non-empty")

    root = MindmapNode.create(id_factory(), text=record.title)
    if record.url:
        root.children.append(MindmapNode.create(id_factory(), text=record.url, link=record.url))
    if record.abstract:
        root.children.append(MindmapNode.create(id_factory(), text="abstract",
                                                detail_note=record.abstract))
    for material in materials:
        if material.kind is MaterialKind.ABSTRACT:
            root.children.append(MindmapNode.create(id_factory(), text=material.kind.label,
                                                    detail_note=material.text))
        else:
            root.children.append(MindmapNode.create(id_factory(), text=material.kind.label,
                                                    link=material.url))
    return root


def _subtree_url(node: MindmapNode) -> Optional[str]:
    if node.link:
        return node.link
    for child in node.children:
        if child.link:
            return child.link
    return None


def import_results(mindmap: Mindmap, target_node_id: str,
                   subtrees: Sequence[MindmapNode]) -> Mindmap:
    """Attach result subtrees under the target node, skipping re-imports.

    A subtree is skipped when its record url matches one already imported
    under the same target; the check is local to the target, so importing
    the same record under two different nodes keeps both copies.
    """
    current = mindmap
    for subtree in subtrees:
        target = current.find(target_node_id)  # raises UnknownNode
        url = _subtree_url(subtree)
        if url is not None and any(_subtree_url(child) == url for child in target.children):
            continue
        current = attach_subtree(current, target_node_id, subtree)
    return current
