"""Minimal XPath evaluator for wrapper pipelines.

Supports exactly the abbreviated subset scraping configs actually use::

    //name            descendants named `name`
    /name             children named `name`
    [n]               1-based position within a step's per-context matches
    [@attr]           attribute existence
    [@attr='lit']     attribute equality
    [contains(@attr,'lit')]  attribute substring

Steps chain left to right; ``*`` matches any element name. Results are in
per-context document order with duplicates removed. Anything outside the
subset raises :class:`UnsupportedXPath`; malformed expressions raise a
syntax error. A full XPath 1.0 engine would dwarf every consumer of this
module, and scraped pages never need one.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional
from xml.etree import ElementTree as ET

from ..errors import UnsupportedXPath, XPathSyntaxError

_NAME = r"[A-Za-z_][\w.-]*"
_STEP_RE = re.compile(rf"(//|/)({_NAME}|\*)")
_PRED_CONTAINS_RE = re.compile(
    rf"contains\(\s*@({_NAME})\s*,\s*(?:'([^']*)'|\"([^\"]*)\")\s*\)$"
)
_PRED_EQ_RE = re.compile(rf"@({_NAME})\s*=\s*(?:'([^']*)'|\"([^\"]*)\")$")
_PRED_EXISTS_RE = re.compile(rf"@({_NAME})$")
_PRED_INDEX_RE = re.compile(r"(\d+)$")

_UNSUPPORTED_HINTS = ("::", "text()", "node()", "comment()", "|", "..",
                      "ancestor", "following", "preceding", "parent::")


@dataclass
class Predicate:
    index: Optional[int] = None
    attr: Optional[str] = None
    value: Optional[str] = None
    contains: bool = False

    def filter(self, nodes: list[ET.Element]) -> list[ET.Element]:
        if self.index is not None:
            return [nodes[self.index - 1]] if 0 < self.index <= len(nodes) else []
        out = []
        for node in nodes:
            got = node.get(self.attr)
            if got is None:
                continue
            if self.value is None:
                out.append(node)
            elif self.contains:
                if self.value in got:
                    out.append(node)
            elif got == self.value:
                out.append(node)
        return out


@dataclass
class Step:
    descendants: bool  # '//' vs '/'
    name: str          # element name or '*'
    predicates: list[Predicate]


def _parse_predicate(text: str) -> Predicate:
    text = text.strip()
    m = _PRED_INDEX_RE.fullmatch(text)
    if m:
        idx = int(m.group(1))
        if idx < 1:
            raise XPathSyntaxError(f"positions are 1-based: [{text}]")
        return Predicate(index=idx)
    m = _PRED_CONTAINS_RE.fullmatch(text)
    if m:
        return Predicate(attr=m.group(1), value=m.group(2) if m.group(2) is not None else m.group(3),
                         contains=True)
    m = _PRED_EQ_RE.fullmatch(text)
    if m:
        return Predicate(attr=m.group(1), value=m.group(2) if m.group(2) is not None else m.group(3))
    m = _PRED_EXISTS_RE.fullmatch(text)
    if m:
        return Predicate(attr=m.group(1))
    if re.match(rf"{_NAME}\s*\(", text) or any(h in text for h in _UNSUPPORTED_HINTS):
        raise UnsupportedXPath(f"unsupported predicate: [{text}]")
    raise XPathSyntaxError(f"cannot parse predicate: [{text}]")


def parse_xpath(expr: str) -> list[Step]:
    if not expr or not expr.strip():
        raise XPathSyntaxError("empty expression")
    expr = expr.strip()
    blanked = re.sub(r"'[^']*'|\"[^\"]*\"", "''", expr)
    for hint in _UNSUPPORTED_HINTS:
        if hint in blanked:
            raise UnsupportedXPath(f"{hint!r} is outside the supported subset: {expr}")
    if not expr.startswith("/"):
        raise UnsupportedXPath(f"expressions must start with / or //: {expr}")

    steps: list[Step] = []
    pos = 0
    while pos < len(expr):
        m = _STEP_RE.match(expr, pos)
        if not m:
            if expr[pos:].startswith("/@") or expr[pos:].startswith("//@"):
                raise UnsupportedXPath(f"attribute selection steps are unsupported: {expr}")
            raise XPathSyntaxError(f"cannot parse step at position {pos}: {expr}")
        descendants = m.group(1) == "//"
        name = m.group(2)
        pos = m.end()

        predicates = []
        while pos < len(expr) and expr[pos] == "[":
            depth = 0
            end = None
            for i in range(pos, len(expr)):
                if expr[i] == "[":
                    depth += 1
                elif expr[i] == "]":
                    depth -= 1
                    if depth == 0:
                        end = i
                        break
            if end is None:
                raise XPathSyntaxError(f"unterminated predicate: {expr}")
            predicates.append(_parse_predicate(expr[pos + 1:end]))
            pos = end + 1

        steps.append(Step(descendants=descendants, name=name, predicates=predicates))
    return steps


def _matches(elem: ET.Element, name: str) -> bool:
    return name == "*" or elem.tag == name


def xpath_eval(nodes: list[ET.Element], expr: str) -> list[ET.Element]:
    """Evaluate ``expr`` against a node list.

    Each step maps every context node to its matching children (``/``) or
    proper descendants (``//``), applies the predicates per context node,
    then concatenates, dropping duplicates while preserving order.
    """
    steps = parse_xpath(expr)
    context = list(nodes)
    for step in steps:
        gathered: list[ET.Element] = []
        for node in context:
            if step.descendants:
                matched = [el for el in node.iter() if el is not node and _matches(el, step.name)]
            else:
                matched = [el for el in node if _matches(el, step.name)]
            for predicate in step.predicates:
                matched = predicate.filter(matched)
            gathered.extend(matched)
        seen: set[int] = set()
        context = []
        for el in gathered:
            if id(el) not in seen:
                seen.add(id(el))
                context.append(el)
    return context
