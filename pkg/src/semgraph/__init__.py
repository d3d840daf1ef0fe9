"""Semantic graph toolkit: a validated concept/entity/omitted-node graph model
with a canonical XML exchange format, DOT rendering, and converters from
AMR/UMR (PENMAN), knowledge-graph triples (Turtle subset), CoNLL-style
causation annotations and UCCA passages."""

from .model import (
    BAD_INDEX_SET,
    DANGLING_TARGET,
    DUPLICATE_ROLE_SLOT,
    EDGE_FROM_NON_CONCEPT,
    ENTITY_OUT_EDGE,
    INDEXING_MISMATCH,
    OMITTED_OUT_EDGE,
    UNKNOWN_CONCEPT,
    UNKNOWN_ROLE,
    VIOLATION_CODES,
    ConceptCatalogue,
    ConceptDefinition,
    ConceptNode,
    Edge,
    EntityNode,
    GraphError,
    InvalidGraphError,
    OmittedNode,
    RoleLabel,
    RoleSpec,
    SemanticGraph,
    Violation,
    merge,
    validate,
)
from .xmlio import catalogue_from_xml, catalogue_to_xml, from_xml, to_xml
from .dot import to_dot
from .penman import (
    PenmanTree,
    UmrDocument,
    amr_to_graph,
    parse_penman,
    parse_penman_file,
    parse_umr_document,
    umr_to_graph,
)
from .kg import TripleStore, events_to_graph, parse_turtle
from .conll import causation_catalogue, causation_to_graph, parse_conll
from .ucca import parse_ucca, ucca_to_graph

__version__ = "0.1.0"

__all__ = [
    "BAD_INDEX_SET",
    "DANGLING_TARGET",
    "DUPLICATE_ROLE_SLOT",
    "EDGE_FROM_NON_CONCEPT",
    "ENTITY_OUT_EDGE",
    "INDEXING_MISMATCH",
    "OMITTED_OUT_EDGE",
    "UNKNOWN_CONCEPT",
    "UNKNOWN_ROLE",
    "VIOLATION_CODES",
    "ConceptCatalogue",
    "ConceptDefinition",
    "ConceptNode",
    "Edge",
    "EntityNode",
    "GraphError",
    "InvalidGraphError",
    "OmittedNode",
    "PenmanTree",
    "RoleLabel",
    "RoleSpec",
    "SemanticGraph",
    "TripleStore",
    "UmrDocument",
    "Violation",
    "amr_to_graph",
    "catalogue_from_xml",
    "catalogue_to_xml",
    "causation_catalogue",
    "causation_to_graph",
    "events_to_graph",
    "from_xml",
    "merge",
    "parse_conll",
    "parse_penman",
    "parse_penman_file",
    "parse_turtle",
    "parse_ucca",
    "parse_umr_document",
    "to_dot",
    "to_xml",
    "ucca_to_graph",
    "umr_to_graph",
    "validate",
]
