"""Core semantic graph data model: typed nodes, role-labelled edges, concept
catalogues and the structural/catalogue validation rules."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Union

_ID_RE = re.compile(r"[A-Za-z0-9_.-]+\Z")

# Violation codes (closed set).
ENTITY_OUT_EDGE = "ENTITY_OUT_EDGE"
OMITTED_OUT_EDGE = "OMITTED_OUT_EDGE"
EDGE_FROM_NON_CONCEPT = "EDGE_FROM_NON_CONCEPT"
DANGLING_TARGET = "DANGLING_TARGET"
DUPLICATE_ROLE_SLOT = "DUPLICATE_ROLE_SLOT"
BAD_INDEX_SET = "BAD_INDEX_SET"
UNKNOWN_CONCEPT = "UNKNOWN_CONCEPT"
UNKNOWN_ROLE = "UNKNOWN_ROLE"
INDEXING_MISMATCH = "INDEXING_MISMATCH"

VIOLATION_CODES = frozenset({
    ENTITY_OUT_EDGE,
    OMITTED_OUT_EDGE,
    EDGE_FROM_NON_CONCEPT,
    DANGLING_TARGET,
    DUPLICATE_ROLE_SLOT,
    BAD_INDEX_SET,
    UNKNOWN_CONCEPT,
    UNKNOWN_ROLE,
    INDEXING_MISMATCH,
})


class GraphError(ValueError):
    """Raised when a graph or catalogue operation breaks a construction rule.

    ``code`` carries the matching violation code when one applies.
    """

    def __init__(self, message: str, code: str | None = None):
        super().__init__(message)
        self.code = code


class InvalidGraphError(GraphError):
    """Raised when an operation requires a valid graph but validation failed."""

    def __init__(self, violations: list[Violation]):
        summary = "; ".join(f"{v.code}: {v.message}" for v in violations)
        super().__init__(f"graph is not valid: {summary}")
        self.violations = violations


def _check_id(node_id: str) -> None:
    if not _ID_RE.match(node_id):
        raise ValueError(f"invalid node id {node_id!r}")


@dataclass(frozen=True)
class RoleLabel:
    """A named role slot, optionally indexed (1-based) for sibling multiplicity."""

    name: str
    index: int | None = None

    def __post_init__(self):
        if not self.name:
            raise ValueError("role name must be non-empty")
        if self.index is not None and self.index < 1:
            raise ValueError("role index must be >= 1")

    def __str__(self) -> str:
        return self.name if self.index is None else f"{self.name}[{self.index}]"


@dataclass
class ConceptNode:
    """Predicate node; the only node kind that may own outgoing role edges."""

    id: str
    name: str

    def __post_init__(self):
        _check_id(self.id)
        if not self.name:
            raise ValueError("concept name must be non-empty")


@dataclass
class EntityNode:
    """Leaf node for an instance: a value plus the classes it belongs to."""

    id: str
    value: str
    classes: list[str] = field(default_factory=list)

    def __post_init__(self):
        _check_id(self.id)
        if not self.value:
            raise ValueError("entity value must be non-empty")


@dataclass
class OmittedNode:
    """Leaf placeholder for a role that is implied but unexpressed in the source."""

    id: str

    def __post_init__(self):
        _check_id(self.id)


Node = Union[ConceptNode, EntityNode, OmittedNode]


@dataclass
class Edge:
    source: str
    label: RoleLabel
    target: str

    def __str__(self) -> str:
        return f"{self.source} -{self.label}-> {self.target}"


@dataclass
class Violation:
    code: str
    subject: str | Edge
    message: str


class SemanticGraph:
    """Directed labelled multigraph of concept, entity and omitted nodes.

    Nodes are keyed by string ids; edges keep insertion order. The ``add_*``
    methods guard the structural rules at construction time, so a graph built
    only through them always passes lax validation. Graphs are meant to be
    built single-threaded and treated as immutable once construction is done;
    no operation in this module mutates a finished graph.
    """

    def __init__(self):
        self.nodes: dict[str, Node] = {}
        self.edges: list[Edge] = []
        self._id_counter = 0

    def _fresh_id(self) -> str:
        while True:
            self._id_counter += 1
            node_id = f"n{self._id_counter}"
            if node_id not in self.nodes:
                return node_id

    def add_concept(self, name: str) -> str:
        """Add a concept node and return its id. Duplicate names are allowed."""
        if not name:
            raise GraphError("concept name must be non-empty")
        node = ConceptNode(self._fresh_id(), name)
        self.nodes[node.id] = node
        return node.id

    def add_entity(self, value: str, classes: Iterable[str] = ()) -> str:
        """Add an entity leaf with the given value and class names (kept in order)."""
        if not value:
            raise GraphError("entity value must be non-empty")
        node = EntityNode(self._fresh_id(), value, list(classes))
        self.nodes[node.id] = node
        return node.id

    def add_omitted(self) -> str:
        """Add an omitted-node leaf and return its id."""
        node = OmittedNode(self._fresh_id())
        self.nodes[node.id] = node
        return node.id

    def add_edge(self, source: str, label: RoleLabel | str, target: str) -> Edge:
        """Add a role edge from a concept to another node.

        Rejects edges whose source is missing or not a concept, whose target is
        missing, whose (source, label) slot is already filled, or whose index
        would leave the role's index set non-contiguous.
        """
        if isinstance(label, str):
            label = RoleLabel(label)
        src = self.nodes.get(source)
        if src is None:
            raise GraphError(f"edge source '{source}' is not in the graph", DANGLING_TARGET)
        if isinstance(src, EntityNode):
            raise GraphError(
                f"entity '{source}' cannot have outgoing edges", ENTITY_OUT_EDGE)
        if isinstance(src, OmittedNode):
            raise GraphError(
                f"omitted node '{source}' cannot have outgoing edges", OMITTED_OUT_EDGE)
        if target not in self.nodes:
            raise GraphError(f"edge target '{target}' is not in the graph", DANGLING_TARGET)
        same_name = [e.label.index for e in self.edges
                     if e.source == source and e.label.name == label.name]
        if label.index in same_name:
            raise GraphError(
                f"role slot '{label}' of '{source}' is already filled", DUPLICATE_ROLE_SLOT)
        if label.index is not None:
            indices = {i for i in same_name if i is not None} | {label.index}
            if indices != set(range(1, len(indices) + 1)):
                raise GraphError(
                    f"adding '{label}' to '{source}' would leave indices {sorted(indices)}"
                    " non-contiguous", BAD_INDEX_SET)
        edge = Edge(source, label, target)
        self.edges.append(edge)
        return edge

    def out_edges(self, node_id: str) -> list[Edge]:
        return [e for e in self.edges if e.source == node_id]

    def in_edges(self, node_id: str) -> list[Edge]:
        return [e for e in self.edges if e.target == node_id]

    def structurally_equal(self, other: SemanticGraph) -> bool:
        """True if both graphs have the same ids, node payloads and edge multiset."""
        if set(self.nodes) != set(other.nodes):
            return False
        for node_id, node in self.nodes.items():
            if node != other.nodes[node_id]:
                return False

        def key(e: Edge):
            return (e.source, e.label.name, e.label.index or 0, e.target)

        return sorted(self.edges, key=key) == sorted(other.edges, key=key)


def add_planned_edges(graph: SemanticGraph,
                      planned: Iterable[tuple[str, RoleLabel, str]]) -> None:
    """Insert planned (source, label, target) edges, repairing slot collisions.

    Edges are grouped by (source, role name) in first-occurrence order and each
    group is inserted together. A group whose labels already occupy distinct
    slots with a contiguous index set is kept as planned; otherwise the whole
    group is re-indexed 1..k in plan order. Frontends use this to honour the
    one-slot-per-role rule when source data repeats a role.
    """
    groups: dict[tuple[str, str], list[tuple[RoleLabel, str]]] = {}
    for source, label, target in planned:
        groups.setdefault((source, label.name), []).append((label, target))
    for (source, name), members in groups.items():
        keys = [label.index for label, _ in members]
        indices = [i for i in keys if i is not None]
        conflict_free = (len(set(keys)) == len(keys)
                         and sorted(indices) == list(range(1, len(indices) + 1)))
        if conflict_free:
            ordered = sorted(members, key=lambda m: (m[0].index is not None, m[0].index or 0))
            for label, target in ordered:
                graph.add_edge(source, label, target)
        else:
            for i, (_, target) in enumerate(members, start=1):
                graph.add_edge(source, RoleLabel(name, i), target)


def _copy_node_into(out: SemanticGraph, node: Node) -> str:
    if isinstance(node, ConceptNode):
        return out.add_concept(node.name)
    if isinstance(node, EntityNode):
        return out.add_entity(node.value, list(node.classes))
    return out.add_omitted()


def _check_fusable(a: Node, b: Node) -> None:
    if isinstance(a, ConceptNode) and isinstance(b, ConceptNode):
        if a.name != b.name:
            raise GraphError(f"cannot fuse concept '{a.name}' with concept '{b.name}'")
    elif isinstance(a, EntityNode) and isinstance(b, EntityNode):
        if a.value != b.value or a.classes != b.classes:
            raise GraphError(
                f"cannot fuse entity '{a.value}' with entity '{b.value}':"
                " values and classes must match")
    elif isinstance(a, OmittedNode) and isinstance(b, OmittedNode):
        pass
    else:
        raise GraphError("cannot fuse nodes of different kinds")


def merge(g1: SemanticGraph, g2: SemanticGraph,
          correspondence: Iterable[tuple[str, str]] = ()) -> SemanticGraph:
    """Disjoint union of two graphs with selected node pairs fused.

    ``correspondence`` holds (id in g1, id in g2) pairs; each pair must join
    nodes of the same kind carrying equal payloads (concept name, or entity
    value and classes). Neither input is mutated. The result gets fresh node
    ids assigned in a fixed order: g1's nodes first, then g2's unfused nodes,
    both in insertion order; edges keep g1-then-g2 order.
    """
    fused_of_g2: dict[str, str] = {}
    seen_g1: set[str] = set()
    for id1, id2 in correspondence:
        if id1 not in g1.nodes:
            raise GraphError(f"correspondence id '{id1}' is not in the first graph")
        if id2 not in g2.nodes:
            raise GraphError(f"correspondence id '{id2}' is not in the second graph")
        if id1 in seen_g1 or id2 in fused_of_g2:
            raise GraphError("a node may appear only once in the correspondence")
        _check_fusable(g1.nodes[id1], g2.nodes[id2])
        seen_g1.add(id1)
        fused_of_g2[id2] = id1
    out = SemanticGraph()
    map1 = {nid: _copy_node_into(out, node) for nid, node in g1.nodes.items()}
    map2 = {}
    for nid, node in g2.nodes.items():
        map2[nid] = map1[fused_of_g2[nid]] if nid in fused_of_g2 else _copy_node_into(out, node)
    for e in g1.edges:
        out.edges.append(Edge(map1[e.source], e.label, map1[e.target]))
    for e in g2.edges:
        out.edges.append(Edge(map2[e.source], e.label, map2[e.target]))
    return out


@dataclass(frozen=True)
class RoleSpec:
    """A role declared by a concept definition; indexed roles take 1..k slots."""

    name: str
    indexed: bool = False


@dataclass
class ConceptDefinition:
    """Declares a concept name together with the roles it may fill."""

    name: str
    roles: list[RoleSpec] = field(default_factory=list)
    description: str | None = None

    def __post_init__(self):
        if not self.name:
            raise GraphError("concept definition name must be non-empty")
        seen = set()
        for role in self.roles:
            if role.name in seen:
                raise GraphError(
                    f"role '{role.name}' declared twice in concept '{self.name}'")
            seen.add(role.name)

    def role(self, name: str) -> RoleSpec | None:
        for role in self.roles:
            if role.name == name:
                return role
        return None


class ConceptCatalogue:
    """Registry of concept definitions keyed by unique concept name.

    Built single-threaded through ``define``; treated as immutable once
    construction is done, after which it may be read from any thread.
    """

    def __init__(self, definitions: Iterable[ConceptDefinition] = ()):
        self.entries: dict[str, ConceptDefinition] = {}
        for definition in definitions:
            self.define(definition)

    def define(self, definition: ConceptDefinition) -> None:
        """Add a definition; redefining an existing name is rejected."""
        if definition.name in self.entries:
            raise GraphError(f"concept '{definition.name}' is already defined")
        self.entries[definition.name] = definition

    def get(self, name: str) -> ConceptDefinition | None:
        return self.entries.get(name)

    def __contains__(self, name: str) -> bool:
        return name in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def names(self) -> list[str]:
        return sorted(self.entries)


def validate(graph: SemanticGraph, catalogue: ConceptCatalogue | None = None,
             mode: str = "lax") -> list[Violation]:
    """Check the graph and return all violations found (empty list = valid).

    Both modes enforce the structural rules: edge endpoints must exist, only
    concepts may own outgoing edges, role slots are unique, and index sets are
    contiguous from 1. Strict mode needs a catalogue and additionally checks
    that every concept name is defined, every edge label is a declared role of
    its source concept, and indexed edges appear exactly on indexed roles.
    Entity class names are not checked against the catalogue.
    """
    if mode not in ("lax", "strict"):
        raise ValueError(f"unknown validation mode: {mode!r}")
    if mode == "strict" and catalogue is None:
        raise ValueError("strict validation requires a catalogue")
    violations: list[Violation] = []
    nodes = graph.nodes
    for edge in graph.edges:
        src = nodes.get(edge.source)
        if src is None:
            violations.append(Violation(
                EDGE_FROM_NON_CONCEPT, edge,
                f"edge source '{edge.source}' is not a node in the graph"))
        elif isinstance(src, EntityNode):
            violations.append(Violation(
                ENTITY_OUT_EDGE, edge,
                f"entity '{edge.source}' has an outgoing edge; entities are leaves"))
        elif isinstance(src, OmittedNode):
            violations.append(Violation(
                OMITTED_OUT_EDGE, edge,
                f"omitted node '{edge.source}' has an outgoing edge"))
        if edge.target not in nodes:
            violations.append(Violation(
                DANGLING_TARGET, edge,
                f"edge target '{edge.target}' is not a node in the graph"))
    slots: dict[tuple[str, str, int | None], list[Edge]] = {}
    for edge in graph.edges:
        slots.setdefault((edge.source, edge.label.name, edge.label.index), []).append(edge)
    for (source, name, index), group in slots.items():
        if len(group) > 1:
            violations.append(Violation(
                DUPLICATE_ROLE_SLOT, group[1],
                f"role slot '{RoleLabel(name, index)}' of '{source}'"
                f" is filled {len(group)} times"))
    index_sets: dict[tuple[str, str], set[int]] = {}
    for edge in graph.edges:
        if edge.label.index is not None:
            index_sets.setdefault((edge.source, edge.label.name), set()).add(edge.label.index)
    for (source, name), indices in index_sets.items():
        if indices != set(range(1, max(indices) + 1)):
            violations.append(Violation(
                BAD_INDEX_SET, source,
                f"indices for role '{name}' of '{source}' are {sorted(indices)},"
                f" expected 1..{len(indices)}"))
    if mode == "strict":
        assert catalogue is not None
        for node_id, node in nodes.items():
            if isinstance(node, ConceptNode) and node.name not in catalogue:
                violations.append(Violation(
                    UNKNOWN_CONCEPT, node_id,
                    f"concept '{node.name}' is not defined in the catalogue"))
        for edge in graph.edges:
            src = nodes.get(edge.source)
            if not isinstance(src, ConceptNode):
                continue
            definition = catalogue.get(src.name)
            if definition is None:
                continue
            declared = definition.role(edge.label.name)
            if declared is None:
                violations.append(Violation(
                    UNKNOWN_ROLE, edge,
                    f"'{edge.label.name}' is not a declared role of concept '{src.name}'"))
            elif declared.indexed != (edge.label.index is not None):
                expected = "indexed" if declared.indexed else "unindexed"
                violations.append(Violation(
                    INDEXING_MISMATCH, edge,
                    f"role '{edge.label.name}' of concept '{src.name}'"
                    f" is declared {expected}"))
    return violations
