"""Command-line entry points.

Subcommands mirror the library's main operations so every piece can run
headless: ``expand`` previews query expansion for a map selection,
``search`` runs a federated search from a service config, ``dedupe`` and
``match-venue`` expose the cleaning stages, ``scrape`` executes one wrapper
config against canned pages, ``report`` renders facet summaries and
``serve`` starts the HTTP service.

Exit codes: 0 success, 1 operation error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from . import expansion as qe
from .cleaning import PublicationRecord, VenueCatalog, match_venue
from .config import ENV_CONFIG_VAR, load_config
from .dedup import deduplicate
from .errors import MindforgeError
from .mindmap import load_mindmap
from .organizer import FacetSpec
from .scrape.config import load_config as load_wrapper_config
from .scrape.engine import FixtureFetcher, HttpFetcher, execute
from .scrape.soup import serialize_nodes


def _fail(message: str, code: str = "error") -> int:
    json.dump({"error": {"code": code, "message": message}}, sys.stderr)
    sys.stderr.write("\n")
    return 1


def cmd_expand(args: argparse.Namespace) -> int:
    mindmap = load_mindmap(args.map)
    stopwords = qe.load_stopwords(args.stopwords) if args.stopwords else None
    neighbourhood = qe.compute_neighbourhood(mindmap, args.select, args.level)
    query = qe.expand_query(args.base, mindmap, neighbourhood, k=args.k,
                            stopwords=stopwords)
    docs = qe.build_documents(mindmap, neighbourhood, stopwords=stopwords)
    scores = qe.score_terms(docs) if docs else []
    json.dump({
        "query": query.query_string(),
        "base_terms": query.base_terms,
        "expansion_terms": query.expansion_terms,
        "neighbourhood_ids": sorted(neighbourhood.included_ids),
        "terms": [{"term": s.term, "score": s.aggregate} for s in scores],
    }, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return 0


def cmd_search(args: argparse.Namespace) -> int:
    from .service import Workbench

    config = load_config(args.config)
    bench = Workbench(config)
    session = bench.run_search(args.base, args.select, args.level, args.k,
                               args.sources.split(",") if args.sources else None,
                               args.limit)
    for record in session.records:
        json.dump(record.to_dict(), sys.stdout)
        sys.stdout.write("\n")
    json.dump({"task_id": session.task_id,
               "query": session.task.query.query_string(),
               "diagnostics": session.diagnostics}, sys.stderr)
    sys.stderr.write("\n")
    return 0


def _read_records(path: str) -> list[PublicationRecord]:
    records = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                records.append(PublicationRecord.from_dict(json.loads(line)))
    return records


def cmd_dedupe(args: argparse.Namespace) -> int:
    records = _read_records(args.input)
    if args.sources:
        order = args.sources.split(",")
    else:
        order = list(dict.fromkeys(r.source_id for r in records))
    per_source = []
    for source_id in order:
        mine = sorted((r for r in records if r.source_id == source_id),
                      key=lambda r: r.source_rank)
        per_source.append((source_id, mine))
    leftovers = [r for r in records if r.source_id not in order]
    if leftovers:
        return _fail(f"records from sources outside the priority order: "
                     f"{sorted({r.source_id for r in leftovers})}")
    out = sys.stdout if args.output == "-" else open(args.output, "w", encoding="utf-8")
    try:
        for record in deduplicate(per_source):
            json.dump(record.to_dict(), out)
            out.write("\n")
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def cmd_match_venue(args: argparse.Namespace) -> int:
    catalog = VenueCatalog.load(args.catalog)
    entry = match_venue(args.venue, catalog,
                        max_sum=args.max_sum if args.max_sum >= 0 else None)
    if entry is None:
        return _fail(f"no entry within distance {args.max_sum}", code="NoMatch")
    json.dump({"acronym": entry[0], "title": entry[1]}, sys.stdout)
    sys.stdout.write("\n")
    return 0


def cmd_scrape(args: argparse.Namespace) -> int:
    config = load_wrapper_config(args.config)
    params = {}
    for raw in args.param:
        if "=" not in raw:
            return _fail(f"--param expects name=value, got {raw!r}")
        name, value = raw.split("=", 1)
        params[name] = value
    fetcher = FixtureFetcher(args.fixtures) if args.fixtures else HttpFetcher()
    context = execute(config, params, fetcher)
    bindings = {}
    for name, value in context.bindings.items():
        if isinstance(value, str):
            bindings[name] = {"type": "text", "value": value}
        else:
            bindings[name] = {"type": "nodes", "count": len(value),
                              "items": serialize_nodes(value)}
    json.dump({"bindings": bindings}, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return 0


def cmd_report(args: argparse.Namespace) -> int:
    from .report import write_facet_report

    records = _read_records(args.input)
    facet = FacetSpec(field=args.field, pattern=args.pattern) if args.pattern \
        else FacetSpec(field=args.facet)
    tsv_path, png_path = write_facet_report(records, facet, args.out)
    print(tsv_path)
    print(png_path)
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    from .service import serve

    config = load_config(args.config)
    serve(config, host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mindforge",
                                     description="mindmap-driven literature search workbench")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("expand", help="preview query expansion for a selection")
    p.add_argument("--map", required=True, help="mindmap .mm file")
    p.add_argument("--select", action="append", required=True, help="selected node id")
    p.add_argument("--base", default="", help="base query text")
    p.add_argument("--level", type=int, default=qe.DEFAULT_LEVEL)
    p.add_argument("--k", type=int, default=qe.DEFAULT_K)
    p.add_argument("--stopwords", help="override the bundled stopword list")
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("search", help="run a federated search from a service config")
    p.add_argument("--config", default=None, help=f"service config (or ${ENV_CONFIG_VAR})")
    p.add_argument("--base", default="", help="base query text")
    p.add_argument("--select", action="append", default=[], help="selected node id")
    p.add_argument("--level", type=int, default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--sources", help="comma-separated source names")
    p.add_argument("--limit", type=int, default=None)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("dedupe", help="deduplicate a JSONL record file")
    p.add_argument("--input", required=True, help="records, one JSON object per line")
    p.add_argument("--output", default="-", help="output path (default stdout)")
    p.add_argument("--sources", help="comma-separated source priority order")
    p.set_defaults(func=cmd_dedupe)

    p = sub.add_parser("match-venue", help="normalize one venue string")
    p.add_argument("venue")
    p.add_argument("--catalog", required=True, help="venue catalog TSV")
    p.add_argument("--max-sum", type=int, default=-1,
                   help="optional distance cutoff (negative disables)")
    p.set_defaults(func=cmd_match_venue)

    p = sub.add_parser("scrape", help="execute one wrapper config")
    p.add_argument("--config", required=True, help="wrapper config XML")
    p.add_argument("--param", action="append", default=[], help="name=value binding")
    p.add_argument("--fixtures", help="fixture page directory (live HTTP if omitted)")
    p.set_defaults(func=cmd_scrape)

    p = sub.add_parser("report", help="facet summary as TSV + chart")
    p.add_argument("--input", required=True, help="records, one JSON object per line")
    p.add_argument("--facet", default="date", help="date, forum or author")
    p.add_argument("--field", default="title", help="record field for --pattern")
    p.add_argument("--pattern", help="regex facet over --field")
    p.add_argument("--out", required=True, help="output basename (writes .tsv and .png)")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--config", default=None, help=f"service config (or ${ENV_CONFIG_VAR})")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except MindforgeError as exc:
        return _fail(str(exc), code=exc.code)
    except FileNotFoundError as exc:
        return _fail(str(exc), code="FileNotFound")


if __name__ == "__main__":
    sys.exit(main())
