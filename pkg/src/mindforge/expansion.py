"""Semantic query expansion from the neighbourhood of selected mindmap nodes.

Selected elements plus everything within a configurable tree distance form a
small corpus: each node is one "document" whose weight depends on its element
kind (topics count more than details). Terms are cleaned, scored with a
tf/idf-flavoured formula and the top-K scorers are appended to the user's
base query.

Per-document term score::

    w(t, d) = freq(t, d) * docfreq(t) * weight(d) / size(d)

and a term's aggregate score is the arithmetic mean of w(t, d) over the
docfreq(t) documents that actually contain it. Ranking sorts by aggregate
score descending with lexicographic tie-break, which makes the output
deterministic and independent of document order.
"""

from __future__ import annotations

import math
import unicodedata
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable, Mapping, Optional

from .errors import EmptyCorpus, UnknownNode, ZeroLevel
from .mindmap import ElementKind, Mindmap

DEFAULT_K = 4
DEFAULT_LEVEL = 1

# Per-kind document weights. Topics outrank details; the rest sit in between.
# Overridable through the service config.
DEFAULT_DOC_WEIGHTS: dict[ElementKind, float] = {
    ElementKind.TOPIC: 2.0,
    ElementKind.LARGER_TOPIC: 2.0,
    ElementKind.KEYWORDS_OBJECT: 1.75,
    ElementKind.QUESTION: 1.5,
    ElementKind.HOT: 1.5,
    ElementKind.NEEDS_ACTION: 1.5,
    ElementKind.WAITING_TOPIC: 1.5,
    ElementKind.DETAIL: 1.0,
    ElementKind.LINK: 1.0,
    ElementKind.CODE_OBJECT: 1.0,
    ElementKind.CLOUD: 1.0,
}


def _strip_punctuation(token: str) -> str:
    # Unicode punctuation is removed; hyphens survive inside a token so
    # compounds like "rank-based" stay intact.
    kept = [ch for ch in token if ch == "-" or not unicodedata.category(ch).startswith("P")]
    return "".join(kept).strip("-")


def tokenize(text: str) -> list[str]:
    """Lowercase, de-punctuate and whitespace-split; no stopword filtering."""
    out = []
    for raw in text.lower().split():
        tok = _strip_punctuation(raw)
        if tok:
            out.append(tok)
    return out


def load_stopwords(path: Optional[str] = None) -> frozenset[str]:
    """Load the stopword list (one term per line, UTF-8).

    Entries pass through the same cleaning as document tokens, so listed
    contractions match their de-punctuated forms.
    """
    if path is None:
        text = resources.files("mindforge.data").joinpath("stopwords.txt").read_text("utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    words = set()
    for line in text.splitlines():
        line = line.strip().lower()
        if not line or line.startswith("#"):
            continue
        cleaned = _strip_punctuation(line)
        if cleaned:
            words.add(cleaned)
    return frozenset(words)


_DEFAULT_STOPWORDS: Optional[frozenset[str]] = None


def default_stopwords() -> frozenset[str]:
    global _DEFAULT_STOPWORDS
    if _DEFAULT_STOPWORDS is None:
        _DEFAULT_STOPWORDS = load_stopwords()
    return _DEFAULT_STOPWORDS


def clean_terms(text: str, stopwords: frozenset[str]) -> list[str]:
    return [tok for tok in tokenize(text) if tok not in stopwords]


@dataclass
class SemanticNeighbourhood:
    """Which nodes feed the expansion corpus.

    ``included_ids`` starts as the system proposal (everything within
    ``level`` steps of a selection) and may be refined by the user.
    """

    selected_ids: set[str]
    level: int
    included_ids: set[str]


@dataclass
class ExpansionDocument:
    doc_id: str
    terms: list[str]
    doc_weight: float
    doc_size: int

    def __post_init__(self):
        if self.doc_size != len(self.terms):
            raise ValueError("doc_size must equal the number of terms")
        if self.doc_weight <= 0:
            raise ValueError("doc_weight must be positive")


@dataclass
class TermScore:
    term: str
    per_doc: dict[str, float]
    aggregate: float
    doc_freq: int
    freq_by_doc: dict[str, int] = field(default_factory=dict)


@dataclass
class ExpandedQuery:
    base_terms: list[str]
    expansion_terms: list[str]
    k: int

    def query_string(self) -> str:
        return " ".join(self.base_terms + self.expansion_terms)


def compute_neighbourhood(mindmap: Mindmap, selected_ids: Iterable[str],
                          level: int) -> SemanticNeighbourhood:
    """Nodes within undirected tree distance ``level`` of any selection.

    Parents and children both count as adjacent; the selected nodes are
    themselves included. Level must be at least 1.
    """
    selected = set(selected_ids)
    if not selected:
        raise UnknownNode("no nodes selected")
    if level < 1:
        raise ZeroLevel(f"neighbourhood level must be >= 1, got {level}")

    all_ids = mindmap.node_ids()
    missing = selected - all_ids
    if missing:
        raise UnknownNode(f"unknown node ids: {sorted(missing)}")

    # undirected adjacency over the tree
    adjacency: dict[str, set[str]] = {nid: set() for nid in all_ids}
    for node in mindmap.nodes():
        for child in node.children:
            adjacency[node.id].add(child.id)
            adjacency[child.id].add(node.id)

    included = set(selected)
    frontier = set(selected)
    for _ in range(level):
        frontier = {nb for nid in frontier for nb in adjacency[nid]} - included
        if not frontier:
            break
        included |= frontier

    return SemanticNeighbourhood(selected_ids=selected, level=level, included_ids=included)


def refine_neighbourhood(mindmap: Mindmap, neighbourhood: SemanticNeighbourhood,
                         add: Iterable[str] = (), remove: Iterable[str] = ()) -> SemanticNeighbourhood:
    """Apply the user's mark/unmark overrides to the proposed neighbourhood."""
    add = set(add)
    remove = set(remove)
    all_ids = mindmap.node_ids()
    missing = (add | remove) - all_ids
    if missing:
        raise UnknownNode(f"unknown node ids: {sorted(missing)}")
    return SemanticNeighbourhood(
        selected_ids=set(neighbourhood.selected_ids),
        level=neighbourhood.level,
        included_ids=(neighbourhood.included_ids | add) - remove,
    )


def build_documents(mindmap: Mindmap, neighbourhood: SemanticNeighbourhood,
                    weights: Optional[Mapping[ElementKind, float]] = None,
                    stopwords: Optional[frozenset[str]] = None) -> list[ExpansionDocument]:
    """Turn each included node into a weighted document.

    Node text and detail note are cleaned together; nodes left with no terms
    are dropped. Document order follows the map's preorder traversal, which
    scoring does not depend on anyway.
    """
    weights = weights or DEFAULT_DOC_WEIGHTS
    stopwords = default_stopwords() if stopwords is None else stopwords

    missing = [k for k in ElementKind if k not in weights]
    if missing:
        raise ValueError(f"weights missing for kinds: {[k.value for k in missing]}")

    docs = []
    for node in mindmap.nodes():
        if node.id not in neighbourhood.included_ids:
            continue
        text = node.text if node.detail_note is None else f"{node.text} {node.detail_note}"
        terms = clean_terms(text, stopwords)
        if not terms:
            continue
        docs.append(ExpansionDocument(
            doc_id=node.id,
            terms=terms,
            doc_weight=float(weights[node.kind]),
            doc_size=len(terms),
        ))
    return docs


def score_terms(docs: list[ExpansionDocument]) -> list[TermScore]:
    """Score every term of the corpus and rank best-first.

    Raises :class:`EmptyCorpus` when there are no documents.
    """
    if not docs:
        raise EmptyCorpus("no documents to score")
    for doc in docs:
        if doc.doc_size <= 0:
            raise ValueError(f"document {doc.doc_id!r} has no terms")

    freq: dict[str, dict[str, int]] = {}
    for doc in docs:
        for term in doc.terms:
            freq.setdefault(term, {})
            freq[term][doc.doc_id] = freq[term].get(doc.doc_id, 0) + 1

    by_id = {doc.doc_id: doc for doc in docs}
    scores = []
    for term, counts in freq.items():
        doc_freq = len(counts)
        per_doc = {}
        for doc_id, n in counts.items():
            doc = by_id[doc_id]
            per_doc[doc_id] = n * doc_freq * doc.doc_weight / doc.doc_size
        # fsum keeps the mean identical under any document ordering
        aggregate = math.fsum(per_doc.values()) / doc_freq
        scores.append(TermScore(term=term, per_doc=per_doc, aggregate=aggregate,
                                doc_freq=doc_freq, freq_by_doc=dict(counts)))

    scores.sort(key=lambda s: (-s.aggregate, s.term))
    return scores


def expand_query(base: str, mindmap: Mindmap, neighbourhood: SemanticNeighbourhood,
                 weights: Optional[Mapping[ElementKind, float]] = None,
                 k: int = DEFAULT_K,
                 stopwords: Optional[frozenset[str]] = None) -> ExpandedQuery:
    """Expand ``base`` with the top-k neighbourhood terms.

    Base terms never reappear in the expansion (case-insensitive, and also
    compared after punctuation cleaning). An empty neighbourhood simply
    yields no expansion terms.
    """
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    base_terms = base.split()
    blocked = {t.lower() for t in base_terms}
    blocked |= {_strip_punctuation(t.lower()) for t in base_terms}

    expansion: list[str] = []
    if k > 0:
        docs = build_documents(mindmap, neighbourhood, weights, stopwords)
        if docs:
            for score in score_terms(docs):
                if score.term.lower() in blocked:
                    continue
                expansion.append(score.term)
                if len(expansion) == k:
                    break
    return ExpandedQuery(base_terms=base_terms, expansion_terms=expansion, k=k)
