"""Execution engine for wrapper configs.

Evaluation walks the var-defs in document order, each pipeline innermost
processor first, and binds the result under the var-def's name. A var-def
with ``overwrite="false"`` keeps an existing binding, which is how callers
inject search terms: pass them as params and the config's placeholder
definition steps aside.

All network traffic goes through an injected fetcher callable, so runs are
hermetic whenever the fetcher is. Two fetchers are provided: a live HTTP one
and a fixture fetcher that resolves URLs to canned files by hash.
"""

from __future__ import annotations

import hashlib
import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Union
from urllib.parse import quote
from xml.etree import ElementTree as ET

from ..errors import FetchFailed, TypeMismatch, UnboundVariable
from .config import ConstText, Http, HtmlToXml, Processor, VarRef, WrapperConfig, XPath
from .soup import html_to_xml
from .xpath import xpath_eval

log = logging.getLogger(__name__)

XmlNodes = list  # list[ET.Element]
Value = Union[str, list]

Fetcher = Callable[[str], Union[str, bytes]]

_PLACEHOLDER = re.compile(r"\$\{(\w+)\}")


@dataclass
class ExecutionContext:
    bindings: dict[str, Value] = field(default_factory=dict)

    def text(self, name: str) -> str:
        value = self.require(name)
        if not isinstance(value, str):
            raise TypeMismatch(f"variable {name!r} holds nodes, expected text")
        return value

    def nodes(self, name: str) -> list:
        value = self.require(name)
        if isinstance(value, str):
            raise TypeMismatch(f"variable {name!r} holds text, expected nodes")
        return value

    def require(self, name: str) -> Value:
        if name not in self.bindings:
            raise UnboundVariable(f"variable {name!r} is not bound")
        return self.bindings[name]


def substitute_url(template: str, bindings: dict[str, Value]) -> str:
    """Splice ``${name}`` placeholders into a URL template.

    Substituted values are URL-escaped; a missing binding is an error rather
    than an empty splice.
    """
    def repl(match: re.Match) -> str:
        name = match.group(1)
        if name not in bindings:
            raise UnboundVariable(f"url template references unbound variable {name!r}")
        value = bindings[name]
        if not isinstance(value, str):
            raise TypeMismatch(f"variable {name!r} holds nodes, cannot splice into a URL")
        return quote(value, safe="")

    return _PLACEHOLDER.sub(repl, template)


def _decode(payload: Union[str, bytes], charset: str) -> str:
    if isinstance(payload, bytes):
        return payload.decode(charset, errors="replace")
    return payload


def evaluate(processor: Processor, bindings: dict[str, Value], fetcher: Fetcher,
             charset: str = "UTF-8") -> Value:
    if isinstance(processor, ConstText):
        return processor.text
    if isinstance(processor, VarRef):
        if processor.name not in bindings:
            raise UnboundVariable(f"variable {processor.name!r} is not bound")
        return bindings[processor.name]
    if isinstance(processor, Http):
        url = substitute_url(processor.url_template, bindings)
        try:
            payload = fetcher(url)
        except FetchFailed:
            raise
        except Exception as exc:
            raise FetchFailed(url, str(exc)) from exc
        return _decode(payload, charset)
    if isinstance(processor, HtmlToXml):
        inner = evaluate(processor.inner, bindings, fetcher, charset)
        if not isinstance(inner, str):
            raise TypeMismatch("html-to-xml expects text input")
        return html_to_xml(inner)
    if isinstance(processor, XPath):
        inner = evaluate(processor.inner, bindings, fetcher, charset)
        if isinstance(inner, str):
            raise TypeMismatch("xpath expects node input; convert with html-to-xml first")
        return xpath_eval(inner, processor.expression)
    raise TypeError(f"unknown processor type: {processor!r}")


def execute(config: WrapperConfig, params: dict[str, str], fetcher: Fetcher) -> ExecutionContext:
    """Run every var-def of ``config`` and return the final bindings.

    ``params`` seed the context; a var-def with ``overwrite="false"`` never
    replaces a seeded binding (its pipeline is skipped entirely, so no
    side-effecting fetch happens for it).
    """
    bindings: dict[str, Value] = {name: str(value) for name, value in params.items()}
    for var_def in config.var_defs:
        if not var_def.overwrite and var_def.name in bindings:
            continue
        bindings[var_def.name] = evaluate(var_def.pipeline, bindings, fetcher, config.charset)
    return ExecutionContext(bindings=bindings)


def url_key(url: str) -> str:
    """Stable short hash used to name fixture files for a URL."""
    return hashlib.sha256(url.encode("utf-8")).hexdigest()[:16]


class FixtureFetcher:
    """Resolves URLs to canned files: ``<dir>/<url_key(url)>[.ext]``.

    Unknown URLs fail loudly, which is exactly what hermetic tests want. A
    human-readable ``index.tsv`` (url TAB filename) is maintained next to
    the payloads by :meth:`store`.
    """

    SUFFIXES = ("", ".html", ".txt", ".xml")

    def __init__(self, directory: Union[str, Path]):
        self.directory = Path(directory)

    def __call__(self, url: str) -> bytes:
        key = url_key(url)
        for suffix in self.SUFFIXES:
            candidate = self.directory / f"{key}{suffix}"
            if candidate.is_file():
                return candidate.read_bytes()
        raise FetchFailed(url, f"no fixture file {key}* in {self.directory}")

    def store(self, url: str, payload: Union[str, bytes], suffix: str = ".html") -> Path:
        self.directory.mkdir(parents=True, exist_ok=True)
        target = self.directory / f"{url_key(url)}{suffix}"
        if isinstance(payload, str):
            target.write_text(payload, encoding="utf-8")
        else:
            target.write_bytes(payload)
        with open(self.directory / "index.tsv", "a", encoding="utf-8") as fh:
            fh.write(f"{url}\t{target.name}\n")
        return target


class HttpFetcher:
    """Live fetcher for production runs; never used by the test suite."""

    def __init__(self, timeout_s: float = 10.0,
                 user_agent: str = "mindforge/0.1"):
        self.timeout_s = timeout_s
        self.user_agent = user_agent

    def __call__(self, url: str) -> bytes:
        import requests

        try:
            response = requests.get(url, timeout=self.timeout_s,
                                    headers={"User-Agent": self.user_agent})
            response.raise_for_status()
        except requests.RequestException as exc:
            raise FetchFailed(url, str(exc)) from exc
        return response.content
