"""Offline top-N evaluation of a ranking model against held-out interactions."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ..graph import Term, term_key
from ..ranker import RankingEnsemble, score_candidates
from .interactions import InteractionLog
from .metrics import average_precision, precision_at_k, recall_at_k

PROTOCOL = "stand-in: catalog minus train items, leave-k-out test relevance"
METRIC_KEYS = ("P@5", "P@10", "MAP", "R@5", "R@10")

# (user, candidates) -> score per candidate
Scorer = Callable[[Term, List[Term]], np.ndarray]


@dataclass
class UserResult:
    user: Term
    relevant: int
    candidates: int
    metrics: Dict[str, float]


@dataclass
class MetricReport:
    metrics: Dict[str, float]
    per_user: List[UserResult] = field(default_factory=list)
    users_evaluated: int = 0
    users_skipped: int = 0
    protocol: str = PROTOCOL

    def __getitem__(self, key: str) -> float:
        return self.metrics[key]

    def to_text(self) -> str:
        lines = [f"{k}\t{self.metrics[k]:.6f}" for k in self.metrics]
        lines.append(f"users_evaluated\t{self.users_evaluated}")
        lines.append(f"users_skipped\t{self.users_skipped}")
        lines.append(f"protocol\t{self.protocol}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        doc = {
            "metrics": {k: round(v, 12) for k, v in self.metrics.items()},
            "users_evaluated": self.users_evaluated,
            "users_skipped": self.users_skipped,
            "protocol": self.protocol,
            "per_user": [
                {
                    "user": r.user.value,
                    "relevant": r.relevant,
                    "candidates": r.candidates,
                    "metrics": {k: round(v, 12) for k, v in r.metrics.items()},
                }
                for r in self.per_user
            ],
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _keys(ks: Sequence[int]) -> Tuple[str, ...]:
    ks = sorted(set(int(k) for k in ks))
    if not ks or ks[0] < 1:
        raise ValueError("k values must be positive")
    return tuple([f"P@{k}" for k in ks] + ["MAP"] + [f"R@{k}" for k in ks])


def evaluate_scorer(
    scorer: Scorer,
    train: InteractionLog,
    test: InteractionLog,
    catalog: Optional[Iterable[Term]] = None,
    ks: Sequence[int] = (5, 10),
) -> MetricReport:
    """Score every test user's candidates with ``scorer`` and aggregate the metrics.

    Candidates are the catalog minus the user's train items; the catalog
    defaults to every item seen in either log.  Ties in score are broken by
    item IRI.  Users with no relevant candidate are skipped and counted.
    """
    if len(test) == 0:
        raise ValueError("empty test set")
    ks = sorted(set(int(k) for k in ks))
    keys = _keys(ks)
    if catalog is None:
        catalog = set(train.items) | set(test.items)
    catalog = sorted(set(catalog), key=term_key)
    seen = train.items_of()
    relevant_of = test.items_of()

    results: List[UserResult] = []
    skipped = 0
    for user in sorted(relevant_of, key=term_key):
        exclude = seen.get(user, set())
        cands = [c for c in catalog if c not in exclude]
        rel_set = relevant_of[user] & set(cands)
        if not rel_set:
            skipped += 1
            continue
        scores = np.asarray(scorer(user, cands), dtype=np.float64)
        if scores.shape != (len(cands),):
            raise ValueError("scorer returned the wrong number of scores")
        order = sorted(range(len(cands)), key=lambda i: (-scores[i], term_key(cands[i])))
        ranked = [1 if cands[i] in rel_set else 0 for i in order]
        total = len(rel_set)
        m = {f"P@{k}": precision_at_k(ranked, k) for k in ks}
        m["MAP"] = average_precision(ranked, total)
        m.update({f"R@{k}": recall_at_k(ranked, total, k) for k in ks})
        results.append(UserResult(user, total, len(cands), {k: m[k] for k in keys}))

    if results:
        agg = {k: float(np.mean([r.metrics[k] for r in results])) for k in keys}
    else:
        agg = {k: 0.0 for k in keys}
    return MetricReport(agg, results, len(results), skipped)


def evaluate(
    model: RankingEnsemble,
    spaces,
    train: InteractionLog,
    test: InteractionLog,
    ks: Sequence[int] = (5, 10),
    catalog: Optional[Iterable[Term]] = None,
) -> MetricReport:
    def scorer(user, cands):
        s = score_candidates(model, user, cands, spaces)
        return np.array([s[c] for c in cands])

    return evaluate_scorer(scorer, train, test, catalog, ks)


def random_scorer(seed: int = 0) -> Scorer:
    """Uniform random scores; one seeded stream consumed in evaluation order."""
    rng = np.random.default_rng(seed)

    def scorer(user, cands):
        return rng.random(len(cands))

    return scorer


def random_baseline(
    train: InteractionLog,
    test: InteractionLog,
    catalog: Optional[Iterable[Term]] = None,
    ks: Sequence[int] = (5, 10),
    repeats: int = 20,
    seed: int = 0,
) -> MetricReport:
    """Metrics of a uniform-random ranker averaged over ``repeats`` seeded draws."""
    if repeats < 1:
        raise ValueError("repeats must be >= 1")
    catalog = None if catalog is None else list(catalog)
    reports = [
        evaluate_scorer(random_scorer(s), train, test, catalog, ks)
        for s in np.random.SeedSequence(seed).generate_state(repeats).tolist()
    ]
    agg = {k: float(np.mean([r.metrics[k] for r in reports])) for k in reports[0].metrics}
    return MetricReport(agg, [], reports[0].users_evaluated, reports[0].users_skipped,
                        PROTOCOL + f"; uniform random scorer, mean of {repeats} draws")
