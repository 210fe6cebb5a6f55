"""HTTP/JSON service for the full search-and-organize cycle.

One process owns one mindmap (loaded at startup, replaced via PUT, saved
atomically on request) plus a set of wrapped sources and engines. Search
sessions live in memory; the mindmap file is the only persistent artifact.
Module errors surface as JSON bodies ``{"error": {"code", "message"}}``
where the code is the stable error name.
"""

from __future__ import annotations

import logging
import threading
import uuid
from dataclasses import dataclass, field
from typing import Optional

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from . import expansion as qe
from .cleaning import PublicationRecord, VenueCatalog
from .config import ServiceConfig
from .errors import ConfigError, MindforgeError
from .mindmap import Mindmap, MindmapNode, load_mindmap, parse_mindmap, save_mindmap
from .orchestrator import (MaterialKind, SearchTask, SidecarTextExtractor,
                           SupportMaterial, extract_abstract, find_blog_posts,
                           find_document, find_slides, harvest_section_headings,
                           vertical_search)
from .organizer import FacetSpec, build_mm_subtree, group_results, import_results
from .scrape.adapters import EngineAdapter, ResultMapping, SourceAdapter
from .scrape.config import load_config as load_wrapper_config
from .scrape.engine import FixtureFetcher, HttpFetcher

log = logging.getLogger(__name__)


class UnknownTask(MindforgeError):
    pass


_STATUS_BY_ERROR = {
    "UnknownNode": 404,
    "UnknownTask": 404,
    "NoCandidates": 404,
    "AbstractNotFound": 404,
    "FetchFailed": 502,
    "AllSourcesFailed": 502,
}


@dataclass
class SearchSession:
    task_id: str
    task: SearchTask
    records: list[PublicationRecord]
    diagnostics: dict
    support: dict[int, list[SupportMaterial]] = field(default_factory=dict)


class Workbench:
    """Runtime state behind the API: mindmap, adapters, sessions."""

    def __init__(self, config: ServiceConfig):
        self.config = config
        self.lock = threading.RLock()
        self.mindmap: Mindmap = load_mindmap(str(config.mindmap_path))
        self.catalog = VenueCatalog.load(str(config.catalog_path))
        self.stopwords = qe.load_stopwords(
            str(config.stopword_path) if config.stopword_path else None)
        self.doc_weights = config.doc_weights
        self.defaults = config.defaults

        if config.fixtures_dir is not None:
            self.fetcher = FixtureFetcher(config.fixtures_dir)
            self.extractor = SidecarTextExtractor(config.fixtures_dir)
        else:
            self.fetcher = HttpFetcher(timeout_s=config.defaults.timeout_s)
            self.extractor = lambda url: ""  # real text extraction is an optional adapter

        self.adapters: dict[str, SourceAdapter] = {}
        for spec in config.sources:  # already priority-ordered
            self.adapters[spec.name] = SourceAdapter(
                name=spec.name,
                config=load_wrapper_config(str(spec.config_path)),
                mapping=ResultMapping.parse(spec.result_mapping),
            )
        self.source_order = [spec.name for spec in config.sources]

        self.engines: dict[str, EngineAdapter] = {}
        for role, spec in config.engines.items():
            self.engines[role] = EngineAdapter(
                name=spec.name,
                config=load_wrapper_config(str(spec.config_path)),
                mapping=ResultMapping.parse(spec.result_mapping),
                filetype_clause=spec.filetype_clause,
            )

        self.sessions: dict[str, SearchSession] = {}

    # mindmap

    def mindmap_json(self) -> dict:
        with self.lock:
            return node_json(self.mindmap.root)

    def replace_mindmap(self, xml_text: str) -> None:
        new_map = parse_mindmap(xml_text, source_path=str(self.config.mindmap_path))
        with self.lock:
            self.mindmap = new_map

    def save(self) -> str:
        with self.lock:
            save_mindmap(self.mindmap, str(self.config.mindmap_path))
        return str(self.config.mindmap_path)

    # expansion

    def preview(self, selected_ids: list[str], level: Optional[int], k: Optional[int],
                add_ids: list[str], remove_ids: list[str]) -> dict:
        level = level if level is not None else self.defaults.level
        k = k if k is not None else self.defaults.k
        with self.lock:
            mindmap = self.mindmap
        neighbourhood = qe.compute_neighbourhood(mindmap, selected_ids, level)
        neighbourhood = qe.refine_neighbourhood(mindmap, neighbourhood, add_ids, remove_ids)
        docs = qe.build_documents(mindmap, neighbourhood, self.doc_weights, self.stopwords)
        scores = qe.score_terms(docs) if docs else []
        return {
            "neighbourhood_ids": sorted(neighbourhood.included_ids),
            "terms": [{"term": s.term, "score": s.aggregate} for s in scores[:k]],
        }

    # search

    def run_search(self, base_query: str, selected_ids: list[str], level: Optional[int],
                   k: Optional[int], sources: Optional[list[str]],
                   limit: Optional[int]) -> SearchSession:
        level = level if level is not None else self.defaults.level
        k = k if k is not None else self.defaults.k
        limit = limit if limit is not None else self.defaults.limit

        if not base_query.strip() and not selected_ids:
            raise ValueError("search needs a base query or a selection")

        with self.lock:
            mindmap = self.mindmap
        if selected_ids:
            neighbourhood = qe.compute_neighbourhood(mindmap, selected_ids, level)
            query = qe.expand_query(base_query, mindmap, neighbourhood,
                                    self.doc_weights, k, self.stopwords)
        else:
            query = qe.ExpandedQuery(base_terms=base_query.split(), expansion_terms=[], k=k)

        if sources:
            unknown = [s for s in sources if s not in self.adapters]
            if unknown:
                raise ValueError(f"unknown sources: {unknown}")
            chosen = [s for s in self.source_order if s in sources]
        else:
            chosen = list(self.source_order)
        if not chosen:
            raise ConfigError("no sources configured")

        task = SearchTask(query=query, sources=chosen, limit=limit,
                          task_id=uuid.uuid4().hex[:12])
        diagnostics: dict = {}
        records = vertical_search(task, self.adapters, self.catalog, self.fetcher,
                                  timeout_s=self.defaults.timeout_s,
                                  diagnostics=diagnostics)
        session = SearchSession(task_id=task.task_id, task=task,
                                records=records, diagnostics=diagnostics)
        self.sessions[task.task_id] = session
        return session

    def session(self, task_id: str) -> SearchSession:
        if task_id not in self.sessions:
            raise UnknownTask(f"no search session {task_id!r}")
        return self.sessions[task_id]

    # support material

    def fetch_support(self, task_id: str, record_index: int,
                      kinds: Optional[list[str]]) -> dict:
        session = self.session(task_id)
        if not 0 <= record_index < len(session.records):
            raise ValueError(f"record index {record_index} out of range")
        record = session.records[record_index]

        wanted = set(kinds or [k.value for k in MaterialKind])
        wanted = {"blog_post" if k == "blog" else k for k in wanted}
        bad = wanted - {k.value for k in MaterialKind}
        if bad:
            raise ValueError(f"unknown support kinds: {sorted(bad)}")

        materials: list[SupportMaterial] = []
        errors: dict[str, str] = {}

        horizontal = self.engines.get("horizontal")
        blog = self.engines.get("blog")

        document: Optional[SupportMaterial] = None
        need_document = bool(wanted & {"document", "slides"}) or (
            "abstract" in wanted and not record.abstract)
        if need_document:
            if horizontal is None:
                errors["document"] = "ConfigError: no horizontal engine configured"
            else:
                try:
                    document = find_document(record, horizontal, self.extractor, self.fetcher)
                except MindforgeError as exc:
                    errors["document"] = f"{exc.code}: {exc}"
        if "document" in wanted and document is not None:
            materials.append(document)

        if "abstract" in wanted:
            try:
                materials.append(extract_abstract(record, document, self.extractor))
            except MindforgeError as exc:
                errors["abstract"] = f"{exc.code}: {exc}"

        if "slides" in wanted:
            if horizontal is None:
                errors["slides"] = "ConfigError: no horizontal engine configured"
            else:
                section_terms: list[str] = []
                if document is not None and document.verified and document.url:
                    section_terms = harvest_section_headings(self.extractor(document.url))
                try:
                    materials.append(find_slides(
                        record, horizontal, self.extractor, self.fetcher,
                        section_terms, self.defaults.m_sections))
                except MindforgeError as exc:
                    errors["slides"] = f"{exc.code}: {exc}"

        if "blog_post" in wanted:
            if blog is None:
                errors["blog_post"] = "ConfigError: no blog engine configured"
            else:
                try:
                    materials.extend(find_blog_posts(record, blog, self.fetcher))
                except (MindforgeError, ValueError) as exc:
                    code = exc.code if isinstance(exc, MindforgeError) else "ValueError"
                    errors["blog_post"] = f"{code}: {exc}"

        session.support[record_index] = materials
        return {"materials": [m.to_dict() for m in materials], "errors": errors}

    # import

    def import_records(self, task_id: str, record_indices: list[int],
                       target_node_id: str) -> dict:
        session = self.session(task_id)
        subtrees = []
        for index in record_indices:
            if not 0 <= index < len(session.records):
                raise ValueError(f"record index {index} out of range")
            record = session.records[index]
            subtrees.append(build_mm_subtree(record, session.support.get(index, [])))
        with self.lock:
            before = len(self.mindmap.find(target_node_id).children)
            self.mindmap = import_results(self.mindmap, target_node_id, subtrees)
            after = len(self.mindmap.find(target_node_id).children)
        imported = after - before
        return {"imported": imported, "skipped": len(subtrees) - imported,
                "target_node_id": target_node_id}


def node_json(node: MindmapNode) -> dict:
    return {
        "id": node.id,
        "text": node.text,
        "kind": node.kind.value,
        "icons": list(node.icons),
        "link": node.link,
        "children": [node_json(child) for child in node.children],
    }


# request bodies

class PreviewRequest(BaseModel):
    selected_ids: list[str]
    level: Optional[int] = None
    k: Optional[int] = None
    add_ids: list[str] = []
    remove_ids: list[str] = []


class SearchRequest(BaseModel):
    base_query: str = ""
    selected_ids: list[str] = []
    level: Optional[int] = None
    k: Optional[int] = None
    sources: Optional[list[str]] = None
    limit: Optional[int] = None


class SupportRequest(BaseModel):
    record_index: int
    kinds: Optional[list[str]] = None


class ImportRequest(BaseModel):
    task_id: str
    record_indices: list[int]
    target_node_id: str


def _parse_facet(raw: str) -> FacetSpec:
    if raw.startswith("regex:"):
        parts = raw.split(":", 2)
        if len(parts) != 3 or not parts[1] or not parts[2]:
            raise ValueError("regex facet must look like regex:FIELD:PATTERN")
        return FacetSpec(field=parts[1], pattern=parts[2])
    return FacetSpec(field=raw)


def create_app(config: ServiceConfig) -> FastAPI:
    bench = Workbench(config)
    app = FastAPI(title="mindforge", version="0.1.0")
    app.state.workbench = bench

    @app.exception_handler(MindforgeError)
    async def mindforge_error(request: Request, exc: MindforgeError):
        status = _STATUS_BY_ERROR.get(exc.code, 400)
        return JSONResponse(status_code=status,
                            content={"error": {"code": exc.code, "message": str(exc)}})

    @app.exception_handler(ValueError)
    async def value_error(request: Request, exc: ValueError):
        return JSONResponse(status_code=400,
                            content={"error": {"code": "ValueError", "message": str(exc)}})

    @app.get("/api/mindmap")
    def get_mindmap():
        return {"format_version": bench.mindmap.format_version, "root": bench.mindmap_json()}

    @app.put("/api/mindmap")
    async def put_mindmap(request: Request):
        body = await request.body()
        bench.replace_mindmap(body.decode("utf-8"))
        return {"ok": True, "node_count": len(list(bench.mindmap.nodes()))}

    @app.post("/api/mindmap/save")
    def save_mindmap_endpoint():
        return {"saved_to": bench.save()}

    @app.post("/api/expansion/preview")
    def expansion_preview(body: PreviewRequest):
        return bench.preview(body.selected_ids, body.level, body.k,
                             body.add_ids, body.remove_ids)

    @app.post("/api/search")
    def search(body: SearchRequest):
        session = bench.run_search(body.base_query, body.selected_ids, body.level,
                                   body.k, body.sources, body.limit)
        return {"task_id": session.task_id,
                "query": session.task.query.query_string(),
                "record_count": len(session.records)}

    @app.get("/api/search/{task_id}/results")
    def search_results(task_id: str, facet: Optional[str] = None):
        session = bench.session(task_id)
        payload = {
            "task_id": task_id,
            "query": session.task.query.query_string(),
            "records": [r.to_dict() for r in session.records],
            "diagnostics": session.diagnostics,
        }
        if facet:
            spec = _parse_facet(facet)
            index_of = {id(r): i for i, r in enumerate(session.records)}
            payload["groups"] = [
                {"label": g.label, "record_indices": [index_of[id(r)] for r in g.records]}
                for g in group_results(session.records, spec)
            ]
        return payload

    @app.post("/api/search/{task_id}/support")
    def search_support(task_id: str, body: SupportRequest):
        return bench.fetch_support(task_id, body.record_index, body.kinds)

    @app.post("/api/import")
    def import_records(body: ImportRequest):
        return bench.import_records(body.task_id, body.record_indices, body.target_node_id)

    @app.get("/api/catalog/venues")
    def catalog_venues():
        return {"venues": [{"acronym": a, "title": t} for a, t in bench.catalog.entries]}

    @app.get("/api/sources")
    def sources():
        return {
            "sources": [{"name": s.name, "priority": s.priority}
                        for s in config.sources],
            "engines": sorted(bench.engines),
        }

    if config.static_dir is not None and config.static_dir.is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=str(config.static_dir), html=True), name="ui")

    return app


def serve(config: ServiceConfig, host: str = "127.0.0.1", port: int = 8000) -> None:
    import uvicorn

    uvicorn.run(create_app(config), host=host, port=port, log_level="info")
