"""Cross-source duplicate elimination via date-keyed blocking.

Records are partitioned by publication year and only records that share a
year (and come from different sources) are ever compared, so the work stays
far below all-pairs. Within a block two records count as duplicates when
their canonicalized titles and normalized venues match exactly. Of each
duplicate set the copy from the highest-priority source survives, ranks
breaking ties; each source's own list is assumed duplicate-free.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Optional, Sequence

from .cleaning import PublicationRecord, canonical_title

# Block key for records without a publication date.
UNKNOWN = "unknown"

BlockKey = Hashable  # year int, or UNKNOWN


@dataclass
class Block:
    key: BlockKey
    records: list[PublicationRecord] = field(default_factory=list)


@dataclass
class DedupStats:
    """Instrumentation: how many record pairs were actually compared."""

    comparisons: int = 0
    by_key: dict[BlockKey, int] = field(default_factory=dict)

    def count(self, key: BlockKey) -> None:
        self.comparisons += 1
        self.by_key[key] = self.by_key.get(key, 0) + 1


def record_block_key(record: PublicationRecord) -> BlockKey:
    return record.date if record.date is not None else UNKNOWN


def duplicate_key(record: PublicationRecord) -> tuple[str, str]:
    """The exact-match identity: (canonical title, normalized venue).

    The venue side uses the normalized acronym when normalization ran,
    falling back to the canonicalized raw string.
    """
    if record.venue_norm is not None:
        venue = record.venue_norm[0]
    else:
        venue = canonical_title(record.venue_raw)
    return canonical_title(record.title), venue


def partition_by_date(records: Sequence[PublicationRecord]) -> dict[BlockKey, Block]:
    """Group records by publication year; dateless records share one block."""
    blocks: dict[BlockKey, Block] = {}
    for record in records:
        key = record_block_key(record)
        blocks.setdefault(key, Block(key=key)).records.append(record)
    return blocks


def deduplicate(per_source: Sequence[tuple[str, Sequence[PublicationRecord]]],
                stats: Optional[DedupStats] = None) -> list[PublicationRecord]:
    """Merge per-source result lists, dropping cross-source duplicates.

    ``per_source`` is ordered by source priority (highest first); ranks
    within a source follow list order. Candidate pairs are generated only
    between different sources and only within equal date keys. Survivors
    keep the ordering (source priority, source rank).
    """
    survivors_by_key: dict[BlockKey, list[tuple[int, tuple[str, str], PublicationRecord]]] = {}
    out: list[PublicationRecord] = []

    for priority, (source_id, records) in enumerate(per_source):
        for record in records:
            key = record_block_key(record)
            identity = duplicate_key(record)
            duplicate = False
            for other_priority, other_identity, _other in survivors_by_key.get(key, []):
                if other_priority == priority:
                    continue  # same source: never compared
                if stats is not None:
                    stats.count(key)
                if identity == other_identity:
                    duplicate = True
                    break
            if not duplicate:
                survivors_by_key.setdefault(key, []).append((priority, identity, record))
                out.append(record)
    return out
