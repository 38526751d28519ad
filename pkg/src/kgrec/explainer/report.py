"""Per-feature matching of a user's preferences against an item's description."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

from ..graph import KnowledgeGraph, Subgraph, Term, Triple, entity_subgraph, triple_key
from ..schema import FEATURES, ITEM_PREDICATES, USER_PREDICATES, Feature
from .similarity import numeric_match, triple_similarity
from .words import WordVectorProvider

METHODS = ("semantic", "numeric", "exact")


class NoOverlapError(ValueError):
    pass


@dataclass(frozen=True)
class PropertyMatch:
    feature: str
    user_triple: Triple
    item_triple: Triple
    score: float
    method: str

    def __post_init__(self):
        if not 0.0 <= self.score <= 1.0:
            raise ValueError(f"score {self.score} outside [0, 1]")
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if self.method == "numeric" and not (self.user_triple.object.is_numeric and self.item_triple.object.is_numeric):
            raise ValueError("numeric method needs numeric literals")


@dataclass(frozen=True)
class ExplanationReport:
    user: Term
    item: Term
    matches: Tuple[PropertyMatch, ...]

    def __post_init__(self):
        if not self.matches:
            raise ValueError("a report needs at least one match")

    @property
    def global_score(self) -> float:
        return sum(m.score for m in self.matches) / len(self.matches)

    def scores(self) -> dict:
        return {m.feature: m.score for m in self.matches}


def extract_profile(
    g: KnowledgeGraph,
    entity: Term,
    role: str,
    predicates: Optional[Sequence[Term]] = None,
) -> Subgraph:
    """Closed-world neighbourhood of ``entity`` restricted to its role's predicates.

    Inference runs first, so items also carry their derived class memberships.
    """
    if role not in ("user", "item"):
        raise ValueError("role must be 'user' or 'item'")
    if not g.mentions(entity):
        raise KeyError(f"entity {entity} not in graph")
    if predicates is None:
        predicates = USER_PREDICATES if role == "user" else ITEM_PREDICATES
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        sub = entity_subgraph(g, entity, depth=1, with_inference=True)
    out = sub.filter(predicates)
    if not out.triples:
        warnings.warn(out.warnings[0], UserWarning, stacklevel=2)
    return out


def score_pair(u: Triple, i: Triple, wv: WordVectorProvider) -> Tuple[float, str]:
    if u.object == i.object:
        return 1.0, "exact"
    if u.object.is_numeric and i.object.is_numeric:
        return numeric_match(u.object.to_python(), i.object.to_python()), "numeric"
    return triple_similarity(u, i, wv), "semantic"


def match_report(
    user_profile: Subgraph,
    item_profile: Subgraph,
    wv: WordVectorProvider,
    features: Sequence[Feature] = FEATURES,
) -> ExplanationReport:
    """One :class:`PropertyMatch` per feature present on both sides, in ``features`` order.

    When a side holds several triples for a feature the best-scoring pair
    is kept, earliest in triple order on ties.
    """
    matches = []
    for f in features:
        us = sorted((t for t in user_profile.triples if t.predicate == f.user_predicate), key=triple_key)
        its = sorted((t for t in item_profile.triples if t.predicate == f.item_predicate), key=triple_key)
        best = None
        for u in us:
            for i in its:
                s, how = score_pair(u, i, wv)
                if best is None or s > best.score:
                    best = PropertyMatch(f.name, u, i, s, how)
        if best is not None:
            matches.append(best)
    if not matches:
        raise NoOverlapError("no explainable overlap")
    return ExplanationReport(user_profile.root, item_profile.root, tuple(matches))


def explain(
    g: KnowledgeGraph,
    user: Term,
    item: Term,
    wv: WordVectorProvider,
    features: Sequence[Feature] = FEATURES,
) -> ExplanationReport:
    users = tuple(dict.fromkeys(f.user_predicate for f in features))
    items = tuple(dict.fromkeys(f.item_predicate for f in features))
    up = extract_profile(g, user, "user", users)
    ip = extract_profile(g, item, "item", items)
    return match_report(up, ip, wv, features)
