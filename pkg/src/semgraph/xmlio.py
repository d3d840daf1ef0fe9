"""Canonical XML exchange format for semantic graphs and concept catalogues.

Writing is byte-deterministic: nodes are sorted by id (byte order), a
concept's role elements keep edge insertion order, and attribute layout is
fixed. Reading accepts any well-formed layout of the same element grammar.
"""

from __future__ import annotations

import re
import xml.etree.ElementTree as ET

from .model import (
    ConceptCatalogue,
    ConceptDefinition,
    ConceptNode,
    Edge,
    EntityNode,
    InvalidGraphError,
    OmittedNode,
    RoleLabel,
    RoleSpec,
    SemanticGraph,
    validate,
)

_ID_RE = re.compile(r"[A-Za-z0-9_.-]+\Z")
_INDEX_RE = re.compile(r"[1-9][0-9]*\Z")


class XmlError(Exception):
    """Base error for reading the XML exchange format."""


class XmlSyntaxError(XmlError):
    """Malformed markup; carries the (line, column) reported by the parser."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        super().__init__(message)
        self.line = line
        self.column = column


class XmlSchemaError(XmlError):
    """Well-formed markup that does not follow the element grammar."""


def _escape(value: str) -> str:
    # Newline/tab/CR must be character references or attribute-value
    # normalization would fold them into spaces on re-parse.
    value = value.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
    value = value.replace('"', "&quot;").replace("'", "&apos;")
    return value.replace("\n", "&#10;").replace("\t", "&#9;").replace("\r", "&#13;")


def to_xml(graph: SemanticGraph) -> str:
    """Serialize a graph that passes lax validation to its canonical XML form."""
    violations = validate(graph)
    if violations:
        raise InvalidGraphError(violations)
    if not graph.nodes:
        return '<semanticgraph version="1"/>'
    roles_of: dict[str, list[Edge]] = {}
    for edge in graph.edges:
        roles_of.setdefault(edge.source, []).append(edge)
    parts = ['<semanticgraph version="1">']
    for node_id in sorted(graph.nodes):
        node = graph.nodes[node_id]
        if isinstance(node, ConceptNode):
            edges = roles_of.get(node_id, [])
            head = f'<concept id="{_escape(node_id)}" name="{_escape(node.name)}"'
            if not edges:
                parts.append(head + "/>")
                continue
            parts.append(head + ">")
            for edge in edges:
                index = "" if edge.label.index is None else f' index="{edge.label.index}"'
                parts.append(f'<role name="{_escape(edge.label.name)}"{index}'
                             f' target="{_escape(edge.target)}"/>')
            parts.append("</concept>")
        elif isinstance(node, EntityNode):
            head = f'<entity id="{_escape(node_id)}" value="{_escape(node.value)}"'
            if not node.classes:
                parts.append(head + "/>")
                continue
            parts.append(head + ">")
            for cls in node.classes:
                parts.append(f'<class name="{_escape(cls)}"/>')
            parts.append("</entity>")
        else:
            parts.append(f'<omitted id="{_escape(node_id)}"/>')
    parts.append("</semanticgraph>")
    return "".join(parts)


def _parse_root(text: str, expected_tag: str) -> ET.Element:
    try:
        root = ET.fromstring(text)
    except ET.ParseError as exc:
        line, column = exc.position if exc.position else (None, None)
        raise XmlSyntaxError(f"malformed XML: {exc}", line, column) from exc
    if root.tag != expected_tag:
        raise XmlSchemaError(
            f"unexpected root element '{root.tag}', expected '{expected_tag}'")
    return root


def _check_attrs(element: ET.Element, required: set[str], optional: set[str] = frozenset()):
    present = set(element.attrib)
    unknown = present - required - optional
    if unknown:
        raise XmlSchemaError(
            f"unknown attribute '{sorted(unknown)[0]}' on element '{element.tag}'")
    missing = required - present
    if missing:
        raise XmlSchemaError(
            f"missing attribute '{sorted(missing)[0]}' on element '{element.tag}'")


def _check_no_text(element: ET.Element):
    if element.text and element.text.strip():
        raise XmlSchemaError(f"unexpected text content in element '{element.tag}'")
    for child in element:
        if child.tail and child.tail.strip():
            raise XmlSchemaError(f"unexpected text content in element '{element.tag}'")


def _check_version(element: ET.Element):
    _check_attrs(element, {"version"})
    version = element.get("version")
    if version != "1":
        raise XmlSchemaError(f"unsupported {element.tag} version '{version}'")


def _node_id(element: ET.Element, seen: set[str]) -> str:
    node_id = element.get("id", "")
    if not _ID_RE.match(node_id):
        raise XmlSchemaError(f"invalid node id {node_id!r} on element '{element.tag}'")
    if node_id in seen:
        raise XmlSchemaError(f"duplicate node id '{node_id}'")
    seen.add(node_id)
    return node_id


def _read_role(element: ET.Element, source: str) -> tuple[str, RoleLabel, str]:
    _check_attrs(element, {"name", "target"}, {"index"})
    _check_no_text(element)
    if len(element):
        raise XmlSchemaError("element 'role' may not have children")
    name = element.get("name", "")
    if not name:
        raise XmlSchemaError(f"empty role name on a role of '{source}'")
    index_text = element.get("index")
    index = None
    if index_text is not None:
        if not _INDEX_RE.match(index_text):
            raise XmlSchemaError(
                f"role index must be a positive integer, got {index_text!r}")
        index = int(index_text)
    return source, RoleLabel(name, index), element.get("target", "")


def from_xml(text: str) -> SemanticGraph:
    """Parse a semantic graph document, preserving the serialized node ids.

    The element grammar is checked strictly with one deliberate exception:
    ``role`` children are also accepted under ``entity`` and ``omitted``
    elements, so that structurally invalid graphs can be loaded and then
    diagnosed by validation (they can never be produced by ``to_xml``).
    Role targets must resolve to an id in the document.
    """
    root = _parse_root(text, "semanticgraph")
    _check_version(root)
    _check_no_text(root)
    graph = SemanticGraph()
    pending_roles: list[tuple[str, RoleLabel, str]] = []
    seen: set[str] = set()
    for element in root:
        if element.tag == "concept":
            _check_attrs(element, {"id", "name"})
            _check_no_text(element)
            node_id = _node_id(element, seen)
            name = element.get("name", "")
            if not name:
                raise XmlSchemaError(f"empty concept name on node '{node_id}'")
            graph.nodes[node_id] = ConceptNode(node_id, name)
            for child in element:
                if child.tag != "role":
                    raise XmlSchemaError(
                        f"unexpected element '{child.tag}' inside 'concept'")
                pending_roles.append(_read_role(child, node_id))
        elif element.tag == "entity":
            _check_attrs(element, {"id", "value"})
            _check_no_text(element)
            node_id = _node_id(element, seen)
            value = element.get("value", "")
            if not value:
                raise XmlSchemaError(f"empty entity value on node '{node_id}'")
            classes: list[str] = []
            for child in element:
                if child.tag == "class":
                    _check_attrs(child, {"name"})
                    _check_no_text(child)
                    if len(child):
                        raise XmlSchemaError("element 'class' may not have children")
                    cls = child.get("name", "")
                    if not cls:
                        raise XmlSchemaError(f"empty class name on entity '{node_id}'")
                    classes.append(cls)
                elif child.tag == "role":
                    pending_roles.append(_read_role(child, node_id))
                else:
                    raise XmlSchemaError(
                        f"unexpected element '{child.tag}' inside 'entity'")
            graph.nodes[node_id] = EntityNode(node_id, value, classes)
        elif element.tag == "omitted":
            _check_attrs(element, {"id"})
            _check_no_text(element)
            node_id = _node_id(element, seen)
            graph.nodes[node_id] = OmittedNode(node_id)
            for child in element:
                if child.tag != "role":
                    raise XmlSchemaError(
                        f"unexpected element '{child.tag}' inside 'omitted'")
                pending_roles.append(_read_role(child, node_id))
        else:
            raise XmlSchemaError(
                f"unexpected element '{element.tag}' inside 'semanticgraph'")
    for source, label, target in pending_roles:
        if target not in graph.nodes:
            raise XmlSchemaError(f"role target references unknown id '{target}'")
        graph.edges.append(Edge(source, label, target))
    return graph


def catalogue_to_xml(catalogue: ConceptCatalogue) -> str:
    """Serialize a catalogue; entries are sorted by concept name.

    Definition descriptions are not part of the exchange format and are
    dropped on write.
    """
    if not catalogue.entries:
        return '<catalogue version="1"/>'
    parts = ['<catalogue version="1">']
    for name in sorted(catalogue.entries):
        definition = catalogue.entries[name]
        head = f'<concept name="{_escape(name)}"'
        if not definition.roles:
            parts.append(head + "/>")
            continue
        parts.append(head + ">")
        for role in definition.roles:
            indexed = ' indexed="true"' if role.indexed else ""
            parts.append(f'<role name="{_escape(role.name)}"{indexed}/>')
        parts.append("</concept>")
    parts.append("</catalogue>")
    return "".join(parts)


def catalogue_from_xml(text: str) -> ConceptCatalogue:
    """Parse a concept catalogue document."""
    root = _parse_root(text, "catalogue")
    _check_version(root)
    _check_no_text(root)
    catalogue = ConceptCatalogue()
    for element in root:
        if element.tag != "concept":
            raise XmlSchemaError(
                f"unexpected element '{element.tag}' inside 'catalogue'")
        _check_attrs(element, {"name"})
        _check_no_text(element)
        name = element.get("name", "")
        if not name:
            raise XmlSchemaError("empty concept name in catalogue")
        if name in catalogue:
            raise XmlSchemaError(f"duplicate concept '{name}' in catalogue")
        roles: list[RoleSpec] = []
        role_names: set[str] = set()
        for child in element:
            if child.tag != "role":
                raise XmlSchemaError(
                    f"unexpected element '{child.tag}' inside catalogue concept")
            _check_attrs(child, {"name"}, {"indexed"})
            _check_no_text(child)
            if len(child):
                raise XmlSchemaError("element 'role' may not have children")
            role_name = child.get("name", "")
            if not role_name:
                raise XmlSchemaError(f"empty role name in concept '{name}'")
            if role_name in role_names:
                raise XmlSchemaError(
                    f"role '{role_name}' declared twice in concept '{name}'")
            role_names.add(role_name)
            indexed_text = child.get("indexed", "false")
            if indexed_text not in ("true", "false"):
                raise XmlSchemaError(
                    f"indexed must be 'true' or 'false', got {indexed_text!r}")
            roles.append(RoleSpec(role_name, indexed_text == "true"))
        catalogue.define(ConceptDefinition(name, roles))
    return catalogue
