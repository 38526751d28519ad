"""Immutable, indexed triple set."""

from __future__ import annotations

from collections import defaultdict
from types import MappingProxyType
from typing import Iterable, Iterator, Optional

from .terms import Term, Triple, term_key, triple_key


class KnowledgeGraph:
    """A deduplicated set of triples indexed by subject, predicate and object.

    Instances are immutable once built.  ``inferred`` holds the subset of
    triples that were derived by rules rather than asserted.
    """

    __slots__ = ("_triples", "_order", "_inferred", "_by_s", "_by_p", "_by_o")

    def __init__(self, triples: Iterable[Triple] = (), inferred: Iterable[Triple] = ()):
        triples = frozenset(triples)
        inferred = frozenset(inferred)
        if not inferred <= triples:
            raise ValueError("inferred triples must be a subset of the graph")
        self._triples = triples
        self._inferred = inferred
        self._order = tuple(sorted(triples, key=triple_key))
        by_s, by_p, by_o = defaultdict(list), defaultdict(list), defaultdict(list)
        for t in self._order:
            by_s[t.subject].append(t)
            by_p[t.predicate].append(t)
            by_o[t.object].append(t)
        self._by_s = MappingProxyType({k: tuple(v) for k, v in by_s.items()})
        self._by_p = MappingProxyType({k: tuple(v) for k, v in by_p.items()})
        self._by_o = MappingProxyType({k: tuple(v) for k, v in by_o.items()})

    def __len__(self) -> int:
        return len(self._triples)

    def __iter__(self) -> Iterator[Triple]:
        return iter(self._order)

    def __contains__(self, triple) -> bool:
        return triple in self._triples

    def __eq__(self, other) -> bool:
        if not isinstance(other, KnowledgeGraph):
            return NotImplemented
        return self._triples == other._triples and self._inferred == other._inferred

    def __hash__(self):
        return hash((self._triples, self._inferred))

    def __repr__(self) -> str:
        return f"KnowledgeGraph({len(self)} triples, {len(self._inferred)} inferred)"

    @property
    def triples(self) -> frozenset:
        return self._triples

    @property
    def inferred(self) -> frozenset:
        return self._inferred

    def is_inferred(self, triple: Triple) -> bool:
        return triple in self._inferred

    def by_subject(self, term: Term) -> tuple:
        return self._by_s.get(term, ())

    def by_predicate(self, term: Term) -> tuple:
        return self._by_p.get(term, ())

    def by_object(self, term: Term) -> tuple:
        return self._by_o.get(term, ())

    @property
    def relation_types(self) -> tuple:
        """Distinct predicates, lexically ordered."""
        return tuple(sorted(self._by_p, key=term_key))

    @property
    def entities(self) -> tuple:
        """Every term used as subject or object, lexically ordered."""
        return tuple(sorted(set(self._by_s) | set(self._by_o), key=term_key))

    def mentions(self, term: Term) -> bool:
        return term in self._by_s or term in self._by_o or term in self._by_p

    def objects(self, subject: Term, predicate: Optional[Term] = None) -> list:
        return [t.object for t in self.by_subject(subject) if predicate is None or t.predicate == predicate]

    def subjects(self, predicate: Term, obj: Term) -> list:
        return [t.subject for t in self.by_object(obj) if t.predicate == predicate]

    def union(self, other: "KnowledgeGraph") -> "KnowledgeGraph":
        return KnowledgeGraph(self._triples | other._triples, self._inferred | other._inferred)

    def asserted(self) -> "KnowledgeGraph":
        """The graph without rule-derived triples."""
        return KnowledgeGraph(self._triples - self._inferred)

    def serialize(self) -> str:
        from .ntriples import serialize_ntriples

        return serialize_ntriples(self._order)


def subgraph_by_relation(g: KnowledgeGraph, predicate: Term) -> KnowledgeGraph:
    """The triples of ``g`` whose predicate is ``predicate`` (the G_p of one relation type)."""
    if not predicate.is_iri:
        raise ValueError("predicate must be an IRI")
    selected = g.by_predicate(predicate)
    return KnowledgeGraph(selected, (t for t in selected if g.is_inferred(t)))
