"""Forward-chaining RDFS-style closure and rooted subgraph extraction."""

from __future__ import annotations

import warnings
from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Tuple

from .store import KnowledgeGraph
from .terms import IRI, RDF_TYPE, RDFS_SUBCLASS_OF, Term, Triple, term_key, triple_key

SUBCLASS_TRANSITIVITY = "subclass-transitivity"
TYPE_PROPAGATION = "type-propagation"
DEFAULT_RULES = (SUBCLASS_TRANSITIVITY, TYPE_PROPAGATION)


class RootNotFoundWarning(UserWarning):
    pass


def _superclasses(subclass_edges: Dict[Term, set]) -> Dict[Term, set]:
    """Classes reachable through one or more subClassOf hops (cycles included)."""
    reach = {}
    for start in subclass_edges:
        seen = set()
        queue = deque(subclass_edges[start])
        while queue:
            c = queue.popleft()
            if c in seen:
                continue
            seen.add(c)
            queue.extend(subclass_edges.get(c, ()))
        reach[start] = seen
    return reach


def infer_closure(
    g: KnowledgeGraph,
    rules=DEFAULT_RULES,
    type_predicate: Term = IRI(RDF_TYPE),
    subclass_predicate: Term = IRI(RDFS_SUBCLASS_OF),
) -> KnowledgeGraph:
    """Least fixpoint of ``g`` under the built-in rules.

    subclass-transitivity: ``A subClassOf B, B subClassOf C => A subClassOf C``
    type-propagation:      ``x type A, A subClassOf B => x type B``

    Every newly derived triple is recorded in the result's ``inferred`` set.
    """
    unknown = set(rules) - set(DEFAULT_RULES)
    if unknown:
        raise ValueError(f"unknown rules: {sorted(unknown)}")
    if subclass_predicate == type_predicate:
        raise ValueError("type and subclass predicates must differ")
    edges = defaultdict(set)
    for t in g.by_predicate(subclass_predicate):
        edges[t.subject].add(t.object)

    derived = set()
    if SUBCLASS_TRANSITIVITY in rules:
        reach = _superclasses(edges)
        for a, supers in reach.items():
            for b in supers:
                derived.add(Triple(a, subclass_predicate, b))
    else:
        reach = {a: set(bs) for a, bs in edges.items()}

    if TYPE_PROPAGATION in rules:
        # BFS over reach also covers chains when transitivity is disabled
        typed = defaultdict(set)
        for t in g.by_predicate(type_predicate):
            typed[t.subject].add(t.object)
        for x, classes in typed.items():
            frontier = deque(classes)
            seen = set(classes)
            while frontier:
                c = frontier.popleft()
                for b in reach.get(c, ()):
                    if b not in seen:
                        seen.add(b)
                        frontier.append(b)
            for b in seen - classes:
                derived.add(Triple(x, type_predicate, b))

    new = derived - g.triples
    return KnowledgeGraph(g.triples | new, g.inferred | new)


@dataclass(frozen=True)
class Subgraph:
    """Triples reachable from ``root``; ``inferred`` marks rule-derived ones."""

    root: Term
    triples: Tuple[Triple, ...]
    inferred: FrozenSet[Triple] = frozenset()
    warnings: Tuple[str, ...] = field(default=())

    def __len__(self) -> int:
        return len(self.triples)

    def __iter__(self):
        return iter(self.triples)

    def is_inferred(self, t: Triple) -> bool:
        return t in self.inferred

    def filter(self, predicates) -> "Subgraph":
        predicates = set(predicates)
        kept = tuple(t for t in self.triples if t.predicate in predicates)
        warns = self.warnings
        if not kept and not warns:
            warns = (f"no triples of the requested predicates around {self.root}",)
        return Subgraph(self.root, kept, frozenset(t for t in kept if t in self.inferred), warns)

    def as_graph(self) -> KnowledgeGraph:
        return KnowledgeGraph(self.triples, self.inferred)


def entity_subgraph(g: KnowledgeGraph, root: Term, depth: int = 1, with_inference: bool = False) -> Subgraph:
    """Breadth-first expansion from ``root`` along subject->object edges.

    With ``depth=1`` this is exactly the triples whose subject is ``root``.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    if with_inference:
        g = infer_closure(g)
    if not g.mentions(root):
        msg = f"root {root} not found in graph"
        warnings.warn(msg, RootNotFoundWarning, stacklevel=2)
        return Subgraph(root, (), frozenset(), (msg,))
    visited = {root}
    frontier = [root]
    collected = set()
    for _ in range(depth):
        nxt = []
        for node in frontier:
            for t in g.by_subject(node):
                collected.add(t)
                if t.object.is_iri and t.object not in visited:
                    visited.add(t.object)
                    nxt.append(t.object)
        frontier = sorted(nxt, key=term_key)
        if not frontier:
            break
    ordered = tuple(sorted(collected, key=triple_key))
    return Subgraph(root, ordered, frozenset(t for t in ordered if g.is_inferred(t)))
