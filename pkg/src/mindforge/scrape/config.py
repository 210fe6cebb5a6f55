"""Parser for XML scraping-workflow configs.

A config is a ``<config charset="...">`` document holding ordered
``<var-def name="..." overwrite="...">`` elements. Each var-def wraps a
pipeline of nested processors, innermost executed first:

``<http url="..."/>``
    fetch a page; ``${name}`` templates substitute current bindings
``<html-to-xml>...</html-to-xml>``
    repair fetched tag soup into XML nodes
``<xpath expression="...">...</xpath>``
    select nodes from its inner processor's result
``<var name="..."/>``
    reference an earlier binding
``<text>...</text>``
    literal text; an empty var-def binds the empty string

The engine that runs these lives in :mod:`mindforge.scrape.engine`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union
from xml.etree import ElementTree as ET

from ..errors import DuplicateVarDef, MalformedConfig, UnknownProcessor


@dataclass
class Http:
    url_template: str


@dataclass
class HtmlToXml:
    inner: "Processor"


@dataclass
class XPath:
    expression: str
    inner: "Processor"


@dataclass
class VarRef:
    name: str


@dataclass
class ConstText:
    text: str = ""


Processor = Union[Http, HtmlToXml, XPath, VarRef, ConstText]


@dataclass
class VarDef:
    name: str
    pipeline: Processor
    overwrite: bool = True


@dataclass
class WrapperConfig:
    var_defs: list[VarDef] = field(default_factory=list)
    charset: str = "UTF-8"

    def var_names(self) -> list[str]:
        return [vd.name for vd in self.var_defs]


def _parse_bool(raw: Optional[str], default: bool) -> bool:
    if raw is None:
        return default
    lowered = raw.strip().lower()
    if lowered in ("true", "1", "yes"):
        return True
    if lowered in ("false", "0", "no"):
        return False
    raise MalformedConfig(f"expected boolean, got {raw!r}")


def _parse_processor(elem: ET.Element) -> Processor:
    tag = elem.tag
    children = list(elem)
    if tag == "http":
        url = elem.get("url")
        if not url:
            raise MalformedConfig("<http> requires a non-empty url attribute")
        if children:
            raise MalformedConfig("<http> takes no nested processors")
        return Http(url_template=url)
    if tag == "html-to-xml":
        if len(children) != 1:
            raise MalformedConfig("<html-to-xml> requires exactly one nested processor")
        return HtmlToXml(inner=_parse_processor(children[0]))
    if tag == "xpath":
        expression = elem.get("expression")
        if not expression:
            raise MalformedConfig("<xpath> requires a non-empty expression attribute")
        if len(children) != 1:
            raise MalformedConfig("<xpath> requires exactly one nested processor")
        return XPath(expression=expression, inner=_parse_processor(children[0]))
    if tag == "var":
        name = elem.get("name")
        if not name:
            raise MalformedConfig("<var> requires a name attribute")
        return VarRef(name=name)
    if tag == "text":
        return ConstText(text=elem.text or "")
    raise UnknownProcessor(f"unknown processor element <{tag}>")


def _parse_var_def(elem: ET.Element) -> VarDef:
    name = elem.get("name")
    if not name:
        raise MalformedConfig("<var-def> requires a name attribute")
    overwrite = _parse_bool(elem.get("overwrite"), default=True)

    children = list(elem)
    if not children:
        pipeline: Processor = ConstText(text=(elem.text or "").strip())
    elif len(children) == 1:
        pipeline = _parse_processor(children[0])
    else:
        raise MalformedConfig(f"<var-def name={name!r}> holds more than one processor")
    return VarDef(name=name, pipeline=pipeline, overwrite=overwrite)


def parse_config(xml_text: str) -> WrapperConfig:
    """Parse a wrapper config document.

    Raises :class:`MalformedConfig` for structural problems,
    :class:`UnknownProcessor` for processor elements outside the dialect and
    :class:`DuplicateVarDef` when two var-defs share a name.
    """
    try:
        doc = ET.fromstring(xml_text)
    except ET.ParseError as exc:
        raise MalformedConfig(f"config is not well-formed XML: {exc}") from exc
    if doc.tag != "config":
        raise MalformedConfig(f"document element is <{doc.tag}>, expected <config>")

    var_defs = []
    seen: set[str] = set()
    for child in doc:
        if child.tag != "var-def":
            raise MalformedConfig(f"unexpected element <{child.tag}> under <config>")
        var_def = _parse_var_def(child)
        if var_def.name in seen:
            raise DuplicateVarDef(f"var-def {var_def.name!r} defined twice")
        seen.add(var_def.name)
        var_defs.append(var_def)
    if not var_defs:
        raise MalformedConfig("config defines no variables")

    return WrapperConfig(var_defs=var_defs, charset=doc.get("charset", "UTF-8"))


def load_config(path: str) -> WrapperConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())
