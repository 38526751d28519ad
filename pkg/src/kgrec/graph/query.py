"""Conjunctive basic-graph-pattern matching."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple, Union

from .store import KnowledgeGraph
from .terms import Term, term_key


@dataclass(frozen=True)
class Variable:
    name: str

    def __post_init__(self):
        if not self.name:
            raise ValueError("variable name must be non-empty")

    def __str__(self) -> str:
        return "?" + self.name


Slot = Union[Term, Variable]
Pattern = Tuple[Slot, Slot, Slot]


def var(name: str) -> Variable:
    return Variable(name.lstrip("?"))


@dataclass(frozen=True)
class PatternQuery:
    """An ordered conjunction of triple patterns; shared variables express joins."""

    patterns: Tuple[Pattern, ...]

    def __init__(self, patterns: Sequence[Pattern]):
        patterns = tuple(tuple(p) for p in patterns)
        if not patterns:
            raise ValueError("a query needs at least one pattern")
        for p in patterns:
            if len(p) != 3 or not all(isinstance(s, (Term, Variable)) for s in p):
                raise ValueError(f"bad pattern {p!r}")
        object.__setattr__(self, "patterns", patterns)

    @property
    def variables(self) -> Tuple[str, ...]:
        """Variable names in order of first appearance."""
        seen: Dict[str, None] = {}
        for p in self.patterns:
            for s in p:
                if isinstance(s, Variable):
                    seen.setdefault(s.name, None)
        return tuple(seen)


def _resolve(slot: Slot, binding: Dict[str, Term]):
    if isinstance(slot, Variable):
        return binding.get(slot.name)
    return slot


def _candidates(g: KnowledgeGraph, s, p, o):
    # narrowest available index
    options = []
    if s is not None:
        options.append(g.by_subject(s))
    if o is not None:
        options.append(g.by_object(o))
    if p is not None:
        options.append(g.by_predicate(p))
    if not options:
        return list(g)
    return min(options, key=len)


def _extend(binding, pattern, triple):
    new = binding
    for slot, value in zip(pattern, (triple.subject, triple.predicate, triple.object)):
        if isinstance(slot, Variable):
            bound = new.get(slot.name)
            if bound is None:
                if new is binding:
                    new = dict(binding)
                new[slot.name] = value
            elif bound != value:
                return None
        elif slot != value:
            return None
    return new


def pattern_match(g: KnowledgeGraph, q: PatternQuery) -> List[Dict[str, Term]]:
    """All variable bindings satisfying every pattern of ``q``.

    Results are sorted by the lexical form of the bound terms, taking
    variables in order of first appearance.  A fully ground query that holds
    yields a single empty binding.
    """
    bindings: List[Dict[str, Term]] = [{}]
    for pattern in q.patterns:
        nxt = []
        for b in bindings:
            s, p, o = (_resolve(slot, b) for slot in pattern)
            for t in _candidates(g, s, p, o):
                ext = _extend(b, pattern, t)
                if ext is not None:
                    nxt.append(ext)
        bindings = nxt
        if not bindings:
            return []
    names = q.variables
    unique = {tuple(b[n] for n in names): b for b in bindings}
    return [unique[k] for k in sorted(unique, key=lambda k: tuple(term_key(t) for t in k))]
