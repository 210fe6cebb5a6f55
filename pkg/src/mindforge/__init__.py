"""Mindmap-driven federated literature search workbench.

Parse a FreeMind map, expand a query from the semantic neighbourhood of the
selected elements, fan the query out to wrapped publication sources, clean
and deduplicate the hits, fetch supporting material, and write selected
results back into the map.
"""

__version__ = "0.1.0"

from .cleaning import (PublicationRecord, VenueCatalog, canonical_title,
                       levenshtein, match_venue, normalize_records)
from .dedup import Block, DedupStats, deduplicate, partition_by_date
from .expansion import (ExpandedQuery, ExpansionDocument, SemanticNeighbourhood,
                        TermScore, build_documents, compute_neighbourhood,
                        expand_query, refine_neighbourhood, score_terms)
from .mindmap import (ElementKind, Mindmap, MindmapNode, attach_subtree,
                      load_mindmap, parse_mindmap, save_mindmap, serialize_mindmap)
from .organizer import (FacetSpec, ResultGroup, build_mm_subtree, group_results,
                        import_results)
from .orchestrator import (MaterialKind, SearchTask, SupportMaterial,
                           extract_abstract, find_blog_posts, find_document,
                           find_slides, vertical_search)

__all__ = [
    "Block", "DedupStats", "ElementKind", "ExpandedQuery", "ExpansionDocument",
    "FacetSpec", "MaterialKind", "Mindmap", "MindmapNode", "PublicationRecord",
    "ResultGroup", "SearchTask", "SemanticNeighbourhood", "SupportMaterial",
    "TermScore", "VenueCatalog", "attach_subtree", "build_documents",
    "build_mm_subtree", "canonical_title", "compute_neighbourhood",
    "deduplicate", "expand_query", "extract_abstract", "find_blog_posts",
    "find_document", "find_slides", "group_results", "import_results",
    "levenshtein", "load_mindmap", "match_venue", "normalize_records",
    "parse_mindmap", "partition_by_date", "refine_neighbourhood",
    "save_mindmap", "score_terms", "serialize_mindmap", "vertical_search",
]
