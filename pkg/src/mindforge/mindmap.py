"""FreeMind ``.mm`` mindmap model: parse, mutate, serialize.

Only a documented subset of the format is handled: ``map``, ``node`` (ID,
TEXT, LINK, CREATED, MODIFIED attributes), ``icon`` (BUILTIN), ``cloud`` and
``richcontent`` notes. Anything else is dropped with a warning so the
round-trip guarantee stays honest: parsing the output of
:func:`serialize_mindmap` always reproduces the same tree.

Element kinds are not stored explicitly by FreeMind, so they are inferred
deterministically from node signals (icons first, then note / cloud / link,
defaulting to a plain topic). Nodes built programmatically through
:meth:`MindmapNode.create` get the same inference applied, which keeps kinds
stable across a serialize/parse cycle.
"""

from __future__ import annotations

import copy
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Optional
from xml.etree import ElementTree as ET

from .errors import DuplicateId, IdCollision, MalformedXml, NotAMindmap, UnknownNode

log = logging.getLogger(__name__)

DEFAULT_FORMAT_VERSION = "1.0.1"


class ElementKind(Enum):
    """Roles a mindmap element can play."""

    TOPIC = "topic"
    LARGER_TOPIC = "larger_topic"
    WAITING_TOPIC = "waiting_topic"
    NEEDS_ACTION = "needs_action"
    HOT = "hot"
    DETAIL = "detail"
    LINK = "link"
    KEYWORDS_OBJECT = "keywords_object"
    CODE_OBJECT = "code_object"
    QUESTION = "question"
    CLOUD = "cloud"


# Fixed icon-name -> kind table. FreeMind stores icons, not roles; this is
# the documented convention used to recover a role from the builtin icons.
# Any "flag" variant (flag, flag-green, ...) counts as a plain topic marker.
ICON_KINDS = {
    "idea": ElementKind.TOPIC,
    "flag": ElementKind.TOPIC,
    "bookmark": ElementKind.LARGER_TOPIC,
    "hourglass": ElementKind.WAITING_TOPIC,
    "yes": ElementKind.NEEDS_ACTION,
    "messagebox_warning": ElementKind.HOT,
    "info": ElementKind.DETAIL,
    "attach": ElementKind.LINK,
    "list": ElementKind.KEYWORDS_OBJECT,
    "executable": ElementKind.CODE_OBJECT,
    "help": ElementKind.QUESTION,
}

_NODE_ATTRS = {"ID", "TEXT", "LINK", "CREATED", "MODIFIED"}


def infer_kind(icons: list[str], detail_note: Optional[str], cloud: bool,
               link: Optional[str]) -> ElementKind:
    """Derive the element kind from node signals.

    Priority: first mapped icon, then note, cloud, link; plain nodes are
    topics.
    """
    for name in icons:
        if name in ICON_KINDS:
            return ICON_KINDS[name]
        if name.startswith("flag"):
            return ElementKind.TOPIC
    if detail_note is not None:
        return ElementKind.DETAIL
    if cloud:
        return ElementKind.CLOUD
    if link is not None:
        return ElementKind.LINK
    return ElementKind.TOPIC


@dataclass
class MindmapNode:
    """One element of a mindmap tree.

    ``children`` order is significant and preserved by the parser and the
    serializer.
    """

    id: str
    text: str = ""
    kind: ElementKind = ElementKind.TOPIC
    icons: list[str] = field(default_factory=list)
    link: Optional[str] = None
    detail_note: Optional[str] = None
    cloud: bool = False
    children: list["MindmapNode"] = field(default_factory=list)

    @classmethod
    def create(cls, node_id: str, text: str = "", *, icons: Optional[list[str]] = None,
               link: Optional[str] = None, detail_note: Optional[str] = None,
               cloud: bool = False, kind: Optional[ElementKind] = None,
               children: Optional[list["MindmapNode"]] = None) -> "MindmapNode":
        """Build a node, inferring ``kind`` from the signals unless given.

        Detail notes are stored whitespace-stripped, matching what the parser
        recovers from FreeMind rich content.
        """
        icons = list(icons or [])
        if detail_note is not None:
            detail_note = detail_note.strip()
        if kind is None:
            kind = infer_kind(icons, detail_note, cloud, link)
        return cls(id=node_id, text=text, kind=kind, icons=icons, link=link,
                   detail_note=detail_note, cloud=cloud, children=list(children or []))

    def walk(self) -> Iterator["MindmapNode"]:
        """Preorder traversal of this subtree."""
        yield self
        for child in self.children:
            yield from child.walk()


@dataclass
class Mindmap:
    root: MindmapNode
    source_path: Optional[str] = field(default=None, compare=False)
    format_version: str = DEFAULT_FORMAT_VERSION

    def nodes(self) -> Iterator[MindmapNode]:
        return self.root.walk()

    def node_ids(self) -> set[str]:
        return {n.id for n in self.nodes()}

    def find(self, node_id: str) -> MindmapNode:
        for node in self.nodes():
            if node.id == node_id:
                return node
        raise UnknownNode(f"no node with id {node_id!r}")

    def parent_of(self, node_id: str) -> Optional[MindmapNode]:
        """Parent node, or None for the root. Raises for unknown ids."""
        if self.root.id == node_id:
            return None
        for node in self.nodes():
            for child in node.children:
                if child.id == node_id:
                    return node
        raise UnknownNode(f"no node with id {node_id!r}")

    def neighbours(self, node_id: str) -> list[MindmapNode]:
        """Adjacent nodes in the undirected tree: parent plus children."""
        node = self.find(node_id)
        parent = self.parent_of(node_id)
        out = [parent] if parent is not None else []
        out.extend(node.children)
        return out


def _check_unique_ids(root: MindmapNode) -> None:
    seen: set[str] = set()
    for node in root.walk():
        if node.id in seen:
            raise DuplicateId(f"node id {node.id!r} occurs more than once")
        seen.add(node.id)


def _note_text(richcontent: ET.Element) -> str:
    return "".join(richcontent.itertext()).strip()


def _parse_node(elem: ET.Element, counter: list[int]) -> MindmapNode:
    node_id = elem.get("ID")
    if node_id is None:
        node_id = f"auto_{counter[0]}"
    counter[0] += 1

    text = elem.get("TEXT", "")
    link = elem.get("LINK")
    icons: list[str] = []
    detail_note: Optional[str] = None
    cloud = False
    children: list[MindmapNode] = []

    for child in elem:
        tag = child.tag
        if tag == "node":
            children.append(_parse_node(child, counter))
        elif tag == "icon":
            builtin = child.get("BUILTIN")
            if builtin:
                icons.append(builtin)
        elif tag == "cloud":
            cloud = True
        elif tag == "richcontent":
            if child.get("TYPE") == "NOTE":
                detail_note = _note_text(child)
            else:
                log.warning("dropping unsupported richcontent TYPE=%r", child.get("TYPE"))
        else:
            log.warning("dropping unsupported element <%s>", tag)

    return MindmapNode(
        id=node_id,
        text=text,
        kind=infer_kind(icons, detail_note, cloud, link),
        icons=icons,
        link=link,
        detail_note=detail_note,
        cloud=cloud,
        children=children,
    )


def parse_mindmap(xml_text: str, source_path: Optional[str] = None) -> Mindmap:
    """Parse FreeMind XML into a :class:`Mindmap`.

    Raises :class:`MalformedXml` for unparseable input, :class:`NotAMindmap`
    when the document element is not ``map``, and :class:`DuplicateId` when
    two nodes share an id.
    """
    try:
        doc = ET.fromstring(xml_text)
    except ET.ParseError as exc:
        raise MalformedXml(str(exc)) from exc
    if doc.tag != "map":
        raise NotAMindmap(f"document element is <{doc.tag}>, expected <map>")

    node_elems = [child for child in doc if child.tag == "node"]
    for child in doc:
        if child.tag != "node":
            log.warning("dropping unsupported element <%s>", child.tag)
    if len(node_elems) != 1:
        raise NotAMindmap(f"expected exactly one root node, found {len(node_elems)}")

    root = _parse_node(node_elems[0], counter=[0])
    _check_unique_ids(root)
    return Mindmap(root=root, source_path=source_path,
                   format_version=doc.get("version", DEFAULT_FORMAT_VERSION))


def load_mindmap(path: str) -> Mindmap:
    with open(path, encoding="utf-8") as fh:
        return parse_mindmap(fh.read(), source_path=path)


def _build_node_elem(node: MindmapNode) -> ET.Element:
    elem = ET.Element("node", {"ID": node.id, "TEXT": node.text})
    if node.link is not None:
        elem.set("LINK", node.link)
    for icon in node.icons:
        ET.SubElement(elem, "icon", {"BUILTIN": icon})
    if node.cloud:
        ET.SubElement(elem, "cloud")
    if node.detail_note is not None:
        rich = ET.SubElement(elem, "richcontent", {"TYPE": "NOTE"})
        html = ET.SubElement(rich, "html")
        ET.SubElement(html, "head")
        body = ET.SubElement(html, "body")
        para = ET.SubElement(body, "p")
        para.text = node.detail_note
    for child in node.children:
        elem.append(_build_node_elem(child))
    return elem


def serialize_mindmap(mindmap: Mindmap) -> str:
    """Emit FreeMind XML; a subsequent parse reproduces the same tree."""
    doc = ET.Element("map", {"version": mindmap.format_version})
    doc.append(_build_node_elem(mindmap.root))
    ET.indent(doc)
    return ET.tostring(doc, encoding="unicode", xml_declaration=True) + "\n"


def save_mindmap(mindmap: Mindmap, path: str) -> None:
    import os
    import tempfile

    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".mm.tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(serialize_mindmap(mindmap))
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def attach_subtree(mindmap: Mindmap, parent_id: str, subtree: MindmapNode) -> Mindmap:
    """Return a new map with ``subtree`` appended as last child of ``parent_id``.

    The original map is left untouched. Subtree ids must be disjoint from the
    map's ids (:class:`IdCollision` otherwise).
    """
    existing = mindmap.node_ids()
    if parent_id not in existing:
        raise UnknownNode(f"no node with id {parent_id!r}")
    incoming = {n.id for n in subtree.walk()}
    clash = existing & incoming
    if clash:
        raise IdCollision(f"subtree ids already present in map: {sorted(clash)}")

    new_root = copy.deepcopy(mindmap.root)
    new_map = Mindmap(root=new_root, source_path=mindmap.source_path,
                      format_version=mindmap.format_version)
    new_map.find(parent_id).children.append(copy.deepcopy(subtree))
    return new_map
