"""Scraping-workflow interpreter: config dialect, repair, XPath, adapters."""

from .adapters import EngineAdapter, EngineHit, ResultMapping, SourceAdapter, node_text
from .config import (ConstText, Http, HtmlToXml, Processor, VarDef, VarRef,
                     WrapperConfig, XPath, load_config, parse_config)
from .engine import (ExecutionContext, Fetcher, FixtureFetcher, HttpFetcher,
                     execute, substitute_url, url_key)
from .soup import html_to_xml, serialize_nodes
from .xpath import xpath_eval

__all__ = [
    "ConstText", "EngineAdapter", "EngineHit", "ExecutionContext", "Fetcher",
    "FixtureFetcher", "Http", "HtmlToXml", "HttpFetcher", "Processor",
    "ResultMapping", "SourceAdapter", "VarDef", "VarRef", "WrapperConfig",
    "XPath", "execute", "html_to_xml", "load_config", "node_text",
    "parse_config", "serialize_nodes", "substitute_url", "url_key", "xpath_eval",
]
