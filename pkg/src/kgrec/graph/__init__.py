"""Parsing, indexing, querying and reasoning over RDF triples."""

from .ntriples import (
    NTriplesParseError,
    parse_term,
    parse_ntriples,
    read_ntriples,
    serialize_ntriples,
    write_ntriples,
)
from .query import PatternQuery, Variable, pattern_match, var
from .reasoning import (
    DEFAULT_RULES,
    RootNotFoundWarning,
    Subgraph,
    entity_subgraph,
    infer_closure,
)
from .store import KnowledgeGraph, subgraph_by_relation
from .terms import (
    IRI,
    RDF_TYPE,
    RDFS_SUBCLASS_OF,
    XSD_DECIMAL,
    XSD_INTEGER,
    XSD_STRING,
    Literal,
    Term,
    Triple,
    term_key,
    triple_key,
)

__all__ = [
    "DEFAULT_RULES", "IRI", "KnowledgeGraph", "Literal", "NTriplesParseError",
    "PatternQuery", "RDFS_SUBCLASS_OF", "RDF_TYPE", "RootNotFoundWarning",
    "Subgraph", "Term", "Triple", "Variable", "XSD_DECIMAL", "XSD_INTEGER",
    "XSD_STRING", "entity_subgraph", "infer_closure", "parse_ntriples",
    "parse_term", "pattern_match", "read_ntriples", "serialize_ntriples", "subgraph_by_relation",
    "term_key", "triple_key", "var", "write_ntriples",
]
