"""Venue-name normalization for retrieved publication records.

Scraped snippets spell the same forum every possible way ("VLDB Conf",
"Very Large Database Conf", ...). Each raw venue string is matched against a
catalog of (acronym, title) pairs by minimizing the summed Levenshtein
distance to both strings of an entry, which gives every record a common
normalized name for downstream grouping and duplicate detection.
"""

from __future__ import annotations

import logging
import unicodedata
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

from .errors import EmptyCatalog

log = logging.getLogger(__name__)

# Venue strings are short; the cap only guards against pathological inputs.
MAX_STRING_LEN = 512


def levenshtein(s1: str, s2: str) -> int:
    """Unit-cost edit distance (insert / delete / substitute one character).

    Inputs longer than ``MAX_STRING_LEN`` characters are truncated with a
    warning to bound the quadratic cost.
    """
    if len(s1) > MAX_STRING_LEN:
        log.warning("levenshtein input truncated to %d chars", MAX_STRING_LEN)
        s1 = s1[:MAX_STRING_LEN]
    if len(s2) > MAX_STRING_LEN:
        log.warning("levenshtein input truncated to %d chars", MAX_STRING_LEN)
        s2 = s2[:MAX_STRING_LEN]

    if s1 == s2:
        return 0
    if not s1:
        return len(s2)
    if not s2:
        return len(s1)

    previous = list(range(len(s2) + 1))
    for i, ch1 in enumerate(s1, start=1):
        current = [i]
        for j, ch2 in enumerate(s2, start=1):
            cost = 0 if ch1 == ch2 else 1
            current.append(min(previous[j] + 1,        # delete from s1
                               current[j - 1] + 1,     # insert into s1
                               previous[j - 1] + cost))  # substitute
        previous = current
    return previous[-1]


@dataclass
class VenueCatalog:
    """Ordered (acronym, title) pairs; order breaks matching ties."""

    entries: list[tuple[str, str]]

    def __post_init__(self):
        for acronym, _title in self.entries:
            if not acronym:
                raise ValueError("catalog acronyms must be non-empty")
        if len(set(self.entries)) != len(self.entries):
            raise ValueError("catalog entries must be unique")

    def __len__(self) -> int:
        return len(self.entries)

    @classmethod
    def load(cls, path: str) -> "VenueCatalog":
        """Read a UTF-8 TSV file, ``acronym<TAB>title`` per line."""
        entries = []
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.rstrip("\n")
                if not line.strip() or line.startswith("#"):
                    continue
                if "\t" not in line:
                    raise ValueError(f"{path}:{lineno}: expected acronym<TAB>title")
                acronym, title = line.split("\t", 1)
                entries.append((acronym, title))
        return cls(entries=entries)


@dataclass
class PublicationRecord:
    """A normalized search hit from one wrapped source."""

    title: str
    authors: list[str] = field(default_factory=list)
    venue_raw: str = ""
    venue_norm: Optional[tuple[str, str]] = None
    date: Optional[int] = None
    url: Optional[str] = None
    abstract: Optional[str] = None
    source_id: str = ""
    source_rank: int = 0

    def __post_init__(self):
        if not self.title:
            raise ValueError("record title must be non-empty")
        if self.date is not None and not 1900 <= self.date <= 2100:
            raise ValueError(f"implausible publication year: {self.date}")

    def to_dict(self) -> dict:
        return {
            "title": self.title,
            "authors": list(self.authors),
            "venue_raw": self.venue_raw,
            "venue_norm": list(self.venue_norm) if self.venue_norm else None,
            "date": self.date,
            "url": self.url,
            "abstract": self.abstract,
            "source_id": self.source_id,
            "source_rank": self.source_rank,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PublicationRecord":
        venue_norm = data.get("venue_norm")
        return cls(
            title=data["title"],
            authors=list(data.get("authors") or []),
            venue_raw=data.get("venue_raw") or "",
            venue_norm=tuple(venue_norm) if venue_norm else None,
            date=data.get("date"),
            url=data.get("url"),
            abstract=data.get("abstract"),
            source_id=data.get("source_id") or "",
            source_rank=int(data.get("source_rank") or 0),
        )


def canonical_title(text: str) -> str:
    """Trim, collapse whitespace, casefold and strip punctuation.

    Shared by duplicate detection and the support-material verification
    heuristics, so "exact matching" survives scraper formatting noise.
    """
    kept = [ch if not unicodedata.category(ch).startswith("P") else " " for ch in text]
    return " ".join("".join(kept).casefold().split())


def match_venue(s: str, catalog: VenueCatalog,
                max_sum: Optional[int] = None) -> Optional[tuple[str, str]]:
    """Catalog entry minimizing ``L(s, acronym) + L(s, title)``.

    Ties go to the earlier catalog entry. When ``max_sum`` is given, a best
    sum above the cutoff yields ``None`` instead of a forced match; by
    default there is no cutoff and some entry always wins.
    """
    if len(catalog) == 0:
        raise EmptyCatalog("cannot match against an empty catalog")

    best: Optional[tuple[str, str]] = None
    best_sum = -1
    for acronym, title in catalog.entries:
        total = levenshtein(s, acronym) + levenshtein(s, title)
        if best is None or total < best_sum:
            best = (acronym, title)
            best_sum = total
    if max_sum is not None and best_sum > max_sum:
        return None
    return best


def normalize_records(records: Sequence[PublicationRecord], catalog: VenueCatalog,
                      max_sum: Optional[int] = None) -> list[PublicationRecord]:
    """Fill ``venue_norm`` on every record with a non-empty raw venue.

    Input order is preserved; records are not mutated in place. Idempotent:
    normalizing twice gives the same result since matching only reads
    ``venue_raw``.
    """
    if len(catalog) == 0:
        raise EmptyCatalog("cannot normalize against an empty catalog")
    out = []
    for record in records:
        if record.venue_raw:
            out.append(replace(record, venue_norm=match_venue(record.venue_raw, catalog, max_sum)))
        else:
            out.append(replace(record, venue_norm=None))
    return out
