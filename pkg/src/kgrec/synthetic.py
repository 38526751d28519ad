"""Seeded vehicle-marketplace data with a known preference rule.

Users state one preferred value per feature and items carry one value per
feature.  A user interacts with the items whose explanation score (the mean
per-feature match, computed without word vectors) clears a threshold that
a bisection pass tunes to the requested interaction count.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .evaluation import Interaction, InteractionLog
from .explainer import WordVectorProvider, triple_similarity
from .graph import KnowledgeGraph, Literal, Term, Triple
from .schema import (
    BODY_STYLE,
    CLASS_HIERARCHY,
    FEATURES,
    FUEL_CLASS,
    FUEL_TYPE,
    MILEAGE,
    PRICE,
    SEATS,
    SUBCLASS_OF,
    TRANSMISSION,
    TYPE,
    USER_CLASS,
    data,
    veh,
)

# Reference scale and interaction density of the original vehicle dataset.
REFERENCE_USERS = 393
REFERENCE_ITEMS = 5537
REFERENCE_INTERACTIONS = 99121
DENSITY = REFERENCE_INTERACTIONS / (REFERENCE_USERS * REFERENCE_ITEMS)

# Feature -> value grid.  Numeric grids are integers so nodes are shared.
VALUE_GRID = {
    PRICE: tuple(range(5000, 60001, 2500)),
    TRANSMISSION: ("Automatic", "Manual"),
    BODY_STYLE: ("Sedan", "SUV", "Hatchback", "Coupe", "Wagon"),
    FUEL_TYPE: ("Petrol", "Diesel", "Electric", "Hybrid"),
    MILEAGE: tuple(range(10000, 150001, 10000)),
    SEATS: (2, 4, 5, 6, 7),
}


@dataclass(frozen=True)
class SyntheticSpec:
    users: int = 50
    items: int = 200
    noise: float = 0.1
    seed: int = 0
    target_interactions: Optional[int] = None
    min_per_user: int = 2

    def __post_init__(self):
        if self.users < 1 or self.items < 1:
            raise ValueError("user and item counts must be >= 1")
        if not 0.0 <= self.noise <= 1.0:
            raise ValueError("noise must lie in [0, 1]")
        if self.min_per_user < 0:
            raise ValueError("min_per_user must be >= 0")

    @property
    def target(self) -> int:
        if self.target_interactions is not None:
            return int(self.target_interactions)
        return max(1, int(round(DENSITY * self.users * self.items)))


def value_term(predicate: Term, value) -> Term:
    if isinstance(value, str):
        return veh(value)
    return Literal(int(value))


def user_iri(i: int) -> Term:
    return data(f"user{i:05d}")


def item_iri(i: int) -> Term:
    return data(f"vehicle{i:05d}")


def _draw_values(rng: np.random.Generator, n: int) -> np.ndarray:
    """``(n, n_features)`` indices into each feature's value grid."""
    cols = [rng.integers(0, len(VALUE_GRID[f.item_predicate]), size=n) for f in FEATURES]
    return np.stack(cols, axis=1)


def _feature_tables() -> list:
    """Per feature, the matrix of match scores between every pair of grid values."""
    empty = WordVectorProvider({})
    s = data("s")
    tables = []
    for f in FEATURES:
        grid = VALUE_GRID[f.item_predicate]
        k = len(grid)
        tab = np.ones((k, k))
        for a in range(k):
            for b in range(k):
                if a == b:
                    continue
                if f.numeric:
                    lo, hi = sorted((grid[a], grid[b]))
                    tab[a, b] = lo / hi
                else:
                    ta = Triple(s, f.user_predicate, value_term(f.user_predicate, grid[a]))
                    tb = Triple(s, f.item_predicate, value_term(f.item_predicate, grid[b]))
                    tab[a, b] = triple_similarity(ta, tb, empty)
        tables.append(tab)
    return tables


def preference_scores(user_values: np.ndarray, item_values: np.ndarray) -> np.ndarray:
    """``(users, items)`` mean per-feature match, equal to the explainer's global score without word vectors."""
    tables = _feature_tables()
    total = np.zeros((len(user_values), len(item_values)))
    for j, tab in enumerate(tables):
        total += tab[user_values[:, j][:, None], item_values[:, j][None, :]]
    return total / len(tables)


def calibrate_threshold(scores: np.ndarray, target: int, iterations: int = 60) -> float:
    """Bisection for ``t`` with ``count(scores > t)`` as close to ``target`` as the ties allow."""
    lo, hi = float(scores.min()) - 1e-9, float(scores.max())
    flat = scores.reshape(-1)
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        if np.count_nonzero(flat > mid) > target:
            lo = mid
        else:
            hi = mid
    c_lo, c_hi = np.count_nonzero(flat > lo), np.count_nonzero(flat > hi)
    return lo if abs(c_lo - target) < abs(c_hi - target) else hi


def generate(spec: SyntheticSpec = SyntheticSpec()) -> Tuple[KnowledgeGraph, InteractionLog]:
    rng = np.random.default_rng(spec.seed)
    user_values = _draw_values(rng, spec.users)
    item_values = _draw_values(rng, spec.items)
    scores = preference_scores(user_values, item_values)
    thr = calibrate_threshold(scores, spec.target)
    liked = scores > thr

    # Noise: each positive is, with probability ``noise``, moved to a random
    # non-positive item of the same user, keeping the interaction count.
    for u in range(spec.users):
        pos = np.nonzero(liked[u])[0]
        flip = pos[rng.random(len(pos)) < spec.noise]
        if len(flip):
            free = np.nonzero(~liked[u])[0]
            take = min(len(flip), len(free))
            if take:
                liked[u, flip[:take]] = False
                liked[u, rng.choice(free, size=take, replace=False)] = True
        short = spec.min_per_user - int(liked[u].sum())
        if short > 0:
            order = np.lexsort((np.arange(spec.items), -scores[u]))
            extra = [i for i in order if not liked[u, i]][:short]
            liked[u, extra] = True

    triples = []
    for sub, sup in CLASS_HIERARCHY:
        triples.append(Triple(sub, SUBCLASS_OF, sup))
    for i in range(spec.items):
        it = item_iri(i)
        for j, f in enumerate(FEATURES):
            triples.append(Triple(it, f.item_predicate, value_term(f.item_predicate, VALUE_GRID[f.item_predicate][item_values[i, j]])))
        fuel = VALUE_GRID[FUEL_TYPE][item_values[i, [f.item_predicate for f in FEATURES].index(FUEL_TYPE)]]
        triples.append(Triple(it, TYPE, FUEL_CLASS[fuel]))
    for u in range(spec.users):
        us = user_iri(u)
        triples.append(Triple(us, TYPE, USER_CLASS))
        for j, f in enumerate(FEATURES):
            triples.append(Triple(us, f.user_predicate, value_term(f.user_predicate, VALUE_GRID[f.user_predicate][user_values[u, j]])))

    records = []
    uu, ii = np.nonzero(liked)
    stamps = rng.permutation(len(uu)) + 1_600_000_000
    for u, i, ts in zip(uu.tolist(), ii.tolist(), stamps.tolist()):
        records.append(Interaction(user_iri(u), item_iri(i), int(ts)))
    return KnowledgeGraph(triples), InteractionLog(records)


def catalog(g: KnowledgeGraph) -> Tuple[Term, ...]:
    """Items: subjects typed with a vehicle class (directly or by inference)."""
    from .graph import infer_closure, term_key
    from .schema import VEHICLE

    closed = infer_closure(g)
    return tuple(sorted(closed.subjects(TYPE, VEHICLE), key=term_key))


FIXTURE_USER = data("customer_1")
FIXTURE_ITEM = data("tesla_m3")


def explanation_fixture() -> KnowledgeGraph:
    """One user and one electric car whose features match at 2/3, 1, 1, 1, 2/3 and 5/6."""
    u, i = FIXTURE_USER, FIXTURE_ITEM
    triples = [Triple(sub, SUBCLASS_OF, sup) for sub, sup in CLASS_HIERARCHY]
    triples += [
        Triple(u, TYPE, USER_CLASS),
        Triple(u, PRICE, Literal(30000)),
        Triple(u, TRANSMISSION, veh("Automatic")),
        Triple(u, BODY_STYLE, veh("Sedan")),
        Triple(u, FUEL_TYPE, veh("Electric")),
        Triple(u, MILEAGE, Literal(20000)),
        Triple(u, SEATS, Literal(5)),
        Triple(i, TYPE, FUEL_CLASS["Electric"]),
        Triple(i, PRICE, Literal(45000)),
        Triple(i, TRANSMISSION, veh("Automatic")),
        Triple(i, BODY_STYLE, veh("Sedan")),
        Triple(i, FUEL_TYPE, veh("Electric")),
        Triple(i, MILEAGE, Literal(30000)),
        Triple(i, SEATS, Literal(6)),
    ]
    return KnowledgeGraph(triples)
