"""Adapters that turn wrapper-config bindings into typed results.

A result mapping declares which bound variable feeds which record field and
how to read each matched node, e.g.::

    title   = "titles:text"     # text content of the i-th node of $titles
    url     = "titles:@href"    # href attribute of the same node
    venue   = "venues:text"
    date    = "years:text"
    authors = "authors:text"

Fields are zipped positionally: record i is assembled from the i-th node of
every mapped variable, the ``title`` variable deciding how many records
exist. Variables with fewer nodes simply leave the field empty for the
trailing records.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from typing import Optional

from ..cleaning import PublicationRecord
from ..errors import MalformedConfig, UnboundVariable
from .config import WrapperConfig
from .engine import Fetcher, execute

log = logging.getLogger(__name__)

_YEAR = re.compile(r"\b(19\d{2}|20\d{2})\b")

RECORD_FIELDS = ("title", "url", "venue", "date", "authors", "abstract", "snippet")


@dataclass
class FieldSpec:
    var: str
    attr: Optional[str] = None  # None means text content

    @classmethod
    def parse(cls, raw: str) -> "FieldSpec":
        if ":" not in raw:
            raise MalformedConfig(f"mapping entry {raw!r} must look like 'var:text' or 'var:@attr'")
        var, how = raw.split(":", 1)
        var = var.strip()
        how = how.strip()
        if not var:
            raise MalformedConfig(f"mapping entry {raw!r} names no variable")
        if how == "text":
            return cls(var=var)
        if how.startswith("@") and len(how) > 1:
            return cls(var=var, attr=how[1:])
        raise MalformedConfig(f"mapping entry {raw!r}: extraction must be 'text' or '@attr'")


@dataclass
class ResultMapping:
    fields: dict[str, FieldSpec]

    @classmethod
    def parse(cls, raw: dict[str, str]) -> "ResultMapping":
        if "title" not in raw:
            raise MalformedConfig("result mapping must map the 'title' field")
        specs = {}
        for name, entry in raw.items():
            if name not in RECORD_FIELDS:
                raise MalformedConfig(f"unknown record field {name!r} in result mapping")
            specs[name] = FieldSpec.parse(entry)
        return cls(fields=specs)

    def variables(self) -> set[str]:
        return {spec.var for spec in self.fields.values()}

    def validate_against(self, config: WrapperConfig) -> None:
        unknown = self.variables() - set(config.var_names())
        if unknown:
            raise MalformedConfig(f"mapping references variables the config never binds: {sorted(unknown)}")


def node_text(node) -> str:
    """Flattened text content with whitespace collapsed."""
    return " ".join("".join(node.itertext()).split())


def _extract(nodes: list, index: int, spec: FieldSpec) -> Optional[str]:
    if index >= len(nodes):
        return None
    node = nodes[index]
    if spec.attr is not None:
        return node.get(spec.attr)
    return node_text(node)


def split_authors(raw: str) -> list[str]:
    parts = re.split(r";|,| and ", raw)
    return [p.strip() for p in parts if p.strip()]


def parse_year(raw: str) -> Optional[int]:
    m = _YEAR.search(raw)
    return int(m.group(1)) if m else None


@dataclass
class SourceAdapter:
    """A wrapped publication source exposed as a uniform search callable."""

    name: str
    config: WrapperConfig
    mapping: ResultMapping
    query_param: str = "searchQuery"

    def __post_init__(self):
        self.mapping.validate_against(self.config)

    def search(self, query: str, fetcher: Fetcher) -> list[PublicationRecord]:
        context = execute(self.config, {self.query_param: query}, fetcher)
        columns: dict[str, list] = {}
        for fname, spec in self.mapping.fields.items():
            value = context.require(spec.var)
            if isinstance(value, str):
                raise UnboundVariable(
                    f"mapped variable {spec.var!r} holds text, expected a node list")
            columns[fname] = value

        count = len(columns["title"])
        records = []
        for i in range(count):
            title = _extract(columns["title"], i, self.mapping.fields["title"])
            if not title:
                log.warning("source %s: hit %d has no title, skipped", self.name, i)
                continue
            values: dict[str, Optional[str]] = {}
            for fname, spec in self.mapping.fields.items():
                if fname == "title":
                    continue
                values[fname] = _extract(columns[fname], i, spec)
            records.append(PublicationRecord(
                title=title,
                authors=split_authors(values.get("authors") or ""),
                venue_raw=values.get("venue") or "",
                date=parse_year(values.get("date") or ""),
                url=values.get("url"),
                abstract=values.get("abstract") or None,
                source_id=self.name,
                source_rank=len(records),
            ))
        return records


@dataclass
class EngineHit:
    title: str
    url: str
    snippet: str = ""


@dataclass
class EngineAdapter:
    """A wrapped general-web search engine for horizontal searches.

    File-type restrictions arrive as a structured argument and are rendered
    with ``filetype_clause``, since restriction syntax is engine-specific.
    """

    name: str
    config: WrapperConfig
    mapping: ResultMapping
    query_param: str = "searchQuery"
    filetype_clause: str = "filetype:{ext}"

    def __post_init__(self):
        self.mapping.validate_against(self.config)

    def render_query(self, query: str, filetype: Optional[str] = None) -> str:
        if filetype:
            return f"{query} {self.filetype_clause.format(ext=filetype)}"
        return query

    def search(self, query: str, fetcher: Fetcher,
               filetype: Optional[str] = None) -> list[EngineHit]:
        rendered = self.render_query(query, filetype)
        context = execute(self.config, {self.query_param: rendered}, fetcher)
        columns = {}
        for fname, spec in self.mapping.fields.items():
            value = context.require(spec.var)
            if isinstance(value, str):
                raise UnboundVariable(
                    f"mapped variable {spec.var!r} holds text, expected a node list")
            columns[fname] = value

        hits = []
        for i in range(len(columns["title"])):
            title = _extract(columns["title"], i, self.mapping.fields["title"])
            url = None
            if "url" in columns:
                url = _extract(columns["url"], i, self.mapping.fields["url"])
            if not title or not url:
                continue
            snippet = ""
            if "snippet" in columns:
                snippet = _extract(columns["snippet"], i, self.mapping.fields["snippet"]) or ""
            hits.append(EngineHit(title=title, url=url, snippet=snippet))
        return hits
