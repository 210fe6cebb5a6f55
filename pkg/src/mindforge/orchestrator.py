"""Coordinates vertical search across sources and horizontal support lookups.

Vertical search fans out one query to every named source adapter
concurrently, tolerates individual source failures, then funnels the merged
list through venue normalization and duplicate elimination. Horizontal
search hunts supporting material for a single record: the publication's own
document (pdf/doc), its abstract, a slide deck and blog posts, each guarded
by the verification heuristic it deserves. Nothing in this module touches
the network except through the injected fetcher and adapters.
"""

from __future__ import annotations

import concurrent.futures
import logging
import re
import time
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Callable, Mapping, Optional, Sequence, Union

from .cleaning import PublicationRecord, VenueCatalog, canonical_title, normalize_records
from .dedup import deduplicate
from .errors import AbstractNotFound, AllSourcesFailed, MindforgeError, NoCandidates
from .expansion import ExpandedQuery
from .scrape.adapters import EngineAdapter, EngineHit, SourceAdapter
from .scrape.engine import Fetcher, url_key

log = logging.getLogger(__name__)

DEFAULT_TIMEOUT_S = 10.0
DEFAULT_MIN_SECTION_HITS = 2

# extractor contract: url -> plain text, empty string on failure
TextExtractor = Callable[[str], str]


@dataclass
class SearchTask:
    query: ExpandedQuery
    sources: list[str]
    limit: int
    task_id: str

    def __post_init__(self):
        if self.limit < 1:
            raise ValueError("limit must be >= 1")
        if not self.sources:
            raise ValueError("at least one source is required")


class MaterialKind(Enum):
    DOCUMENT = "document"
    ABSTRACT = "abstract"
    SLIDES = "slides"
    BLOG_POST = "blog_post"

    @property
    def label(self) -> str:
        return {"document": "Document", "abstract": "Abstract",
                "slides": "Slides", "blog_post": "BlogPost"}[self.value]


@dataclass
class SupportMaterial:
    kind: MaterialKind
    url: Optional[str] = None
    text: Optional[str] = None
    verified: bool = False
    evidence: str = ""

    def __post_init__(self):
        if self.kind is MaterialKind.ABSTRACT:
            if not self.text:
                raise ValueError("abstract material must carry text")
        elif not self.url:
            raise ValueError(f"{self.kind.value} material must carry a url")
        if not self.evidence:
            raise ValueError("material must explain its verification status")

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "url": self.url, "text": self.text,
                "verified": self.verified, "evidence": self.evidence}


class SidecarTextExtractor:
    """Reads pre-extracted plain text stored next to the page fixtures.

    Keyed by the same URL hash as the fixture fetcher; a missing sidecar
    yields the empty string (extraction failure, never an exception).
    """

    def __init__(self, directory: Union[str, Path]):
        self.directory = Path(directory)

    def __call__(self, url: str) -> str:
        candidate = self.directory / f"{url_key(url)}.txt"
        if candidate.is_file():
            return candidate.read_text(encoding="utf-8")
        return ""

    def store(self, url: str, text: str) -> Path:
        self.directory.mkdir(parents=True, exist_ok=True)
        target = self.directory / f"{url_key(url)}.txt"
        target.write_text(text, encoding="utf-8")
        return target


def vertical_search(task: SearchTask, adapters: Mapping[str, SourceAdapter],
                    catalog: VenueCatalog, fetcher: Fetcher,
                    timeout_s: float = DEFAULT_TIMEOUT_S,
                    diagnostics: Optional[dict] = None) -> list[PublicationRecord]:
    """Query every source, then normalize venues and drop duplicates.

    Per-source failures are recorded in ``diagnostics`` and contribute zero
    records; only when every source fails does the whole search raise
    :class:`AllSourcesFailed`. Output order is (source priority, rank) with
    priority given by the order of ``task.sources``, so it does not depend
    on which source answered first.
    """
    unknown = [s for s in task.sources if s not in adapters]
    if unknown:
        raise ValueError(f"unknown sources: {unknown}")

    query = task.query.query_string()
    per_source: dict[str, list[PublicationRecord]] = {}
    failures: dict[str, str] = {}

    with concurrent.futures.ThreadPoolExecutor(max_workers=len(task.sources)) as pool:
        started = time.monotonic()
        futures = {name: pool.submit(adapters[name].search, query, fetcher)
                   for name in task.sources}
        for name, future in futures.items():
            remaining = max(0.0, timeout_s - (time.monotonic() - started))
            try:
                per_source[name] = future.result(timeout=remaining)[:task.limit]
            except concurrent.futures.TimeoutError:
                failures[name] = f"timed out after {timeout_s}s"
                future.cancel()
            except MindforgeError as exc:
                failures[name] = f"{exc.code}: {exc}"
            except Exception as exc:
                failures[name] = str(exc)

    if diagnostics is not None:
        for name in task.sources:
            if name in failures:
                diagnostics[name] = {"status": "error", "message": failures[name]}
            else:
                diagnostics[name] = {"status": "ok", "count": len(per_source[name])}
    for name, message in failures.items():
        log.warning("source %s failed: %s", name, message)

    if len(failures) == len(task.sources):
        raise AllSourcesFailed(f"every source failed: {failures}")

    ordered = [(name, normalize_records(per_source[name], catalog))
               for name in task.sources if name in per_source]
    return deduplicate(ordered)


def _verify_title(record: PublicationRecord, text: str) -> bool:
    if not text:
        return False
    return canonical_title(record.title) in canonical_title(text)


def find_document(record: PublicationRecord, engine: EngineAdapter,
                  extractor: TextExtractor, fetcher: Fetcher) -> SupportMaterial:
    """Locate the publication's own document via the horizontal engine.

    Tries ``filetype:pdf`` and then ``filetype:doc``; a candidate counts as
    verified when the canonicalized title occurs inside its extracted text.
    Falls back to the first candidate, unverified, when nothing passes.
    """
    query = f'"{record.title}"'
    first_hit: Optional[EngineHit] = None
    for ext in ("pdf", "doc"):
        hits = engine.search(query, fetcher, filetype=ext)
        for hit in hits:
            if first_hit is None:
                first_hit = hit
            if _verify_title(record, extractor(hit.url)):
                return SupportMaterial(kind=MaterialKind.DOCUMENT, url=hit.url,
                                       verified=True, evidence="title-substring")
    if first_hit is None:
        raise NoCandidates(f"no document candidates for {record.title!r}")
    return SupportMaterial(kind=MaterialKind.DOCUMENT, url=first_hit.url,
                           verified=False, evidence="title-not-found-in-text")


_HEADING = re.compile(
    r"^(?:\d+[.)]?\s+\S.*|(?:introduction|keywords|index terms|"
    r"categories and subject descriptors|related work|background|references)\b.*)$",
    re.IGNORECASE,
)


def _abstract_from_text(text: str) -> Optional[str]:
    lines = text.splitlines()
    start = None
    for i, line in enumerate(lines):
        if line.strip().lower() == "abstract":
            start = i + 1
            break
    if start is None:
        return None
    collected: list[str] = []
    for line in lines[start:]:
        if _HEADING.match(line.strip()):
            break
        collected.append(line.strip())
    paragraph = " ".join(" ".join(collected).split())
    return paragraph or None


def extract_abstract(record: PublicationRecord, doc: Optional[SupportMaterial],
                     extractor: TextExtractor) -> SupportMaterial:
    """Source metadata wins; otherwise parse the located document's text.

    The parsed path takes everything between a line reading "Abstract" and
    the next section heading. Raises :class:`AbstractNotFound` when neither
    route produces text.
    """
    if record.abstract:
        return SupportMaterial(kind=MaterialKind.ABSTRACT, text=record.abstract,
                               url=record.url, verified=True, evidence="source-metadata")
    if doc is not None and doc.url:
        paragraph = _abstract_from_text(extractor(doc.url))
        if paragraph:
            return SupportMaterial(kind=MaterialKind.ABSTRACT, text=paragraph,
                                   url=doc.url, verified=False,
                                   evidence="parsed-from-document")
    raise AbstractNotFound(f"no abstract found for {record.title!r}")


def harvest_section_headings(text: str) -> list[str]:
    """Pull section titles out of document text, numbering stripped."""
    headings = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.lower() == "abstract":
            continue
        if _HEADING.match(line):
            title = re.sub(r"^\d+[.)]?\s+", "", line).strip()
            if title:
                headings.append(title)
    return headings


def find_slides(record: PublicationRecord, engine: EngineAdapter,
                extractor: TextExtractor, fetcher: Fetcher,
                section_terms: Sequence[str] = (),
                min_section_hits: int = DEFAULT_MIN_SECTION_HITS) -> SupportMaterial:
    """Locate a slide deck for the publication (``ppt`` then ``pdf``).

    A candidate verifies when its text contains "outline", or when at least
    ``min_section_hits`` of the supplied section terms (typically headings
    harvested from the verified document) appear inside.
    """
    query = f'"{record.title}"'
    first_hit: Optional[EngineHit] = None
    for ext in ("ppt", "pdf"):
        hits = engine.search(query, fetcher, filetype=ext)
        for hit in hits:
            if first_hit is None:
                first_hit = hit
            text = extractor(hit.url)
            if not text:
                continue
            folded = canonical_title(text)
            if "outline" in folded:
                return SupportMaterial(kind=MaterialKind.SLIDES, url=hit.url,
                                       verified=True, evidence="outline")
            if section_terms:
                matched = sum(1 for term in section_terms
                              if canonical_title(term) and canonical_title(term) in folded)
                if matched >= min_section_hits:
                    return SupportMaterial(
                        kind=MaterialKind.SLIDES, url=hit.url, verified=True,
                        evidence=f"sections:{matched}/{len(section_terms)}")
    if first_hit is None:
        raise NoCandidates(f"no slide candidates for {record.title!r}")
    return SupportMaterial(kind=MaterialKind.SLIDES, url=first_hit.url,
                           verified=False, evidence="no-heuristic-matched")


def find_blog_posts(record: PublicationRecord, engine: EngineAdapter,
                    fetcher: Fetcher) -> list[SupportMaterial]:
    """Blog posts about the publication: title terms plus the first author's
    family name, no verification heuristic."""
    if not record.authors:
        raise ValueError("blog search needs at least one author")
    family_name = record.authors[0].split()[-1]
    query = f"{record.title} {family_name}"
    hits = engine.search(query, fetcher)
    if not hits:
        raise NoCandidates(f"no blog posts for {record.title!r}")
    return [SupportMaterial(kind=MaterialKind.BLOG_POST, url=hit.url,
                            text=hit.title, verified=False,
                            evidence="engine-result, no verification heuristic")
            for hit in hits]
