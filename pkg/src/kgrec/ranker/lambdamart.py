"""LambdaMART: gradient-boosted regression trees fitted to lambda gradients."""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from ..graph import Term, term_key
from .features import TrainingInstance, feature_matrix
from .lambdas import lambda_gradients, ndcg_at
from .tree import LEAF, RegressionTree, fit_regression_tree

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1


class UntrainableError(ValueError):
    pass


class NoSplitsWarning(UserWarning):
    pass


@dataclass(frozen=True)
class LambdaMartConfig:
    num_trees: int = 300
    max_leaves: int = 10
    shrinkage: float = 0.1
    min_instances_per_leaf: int = 1
    truncation: int = 10
    seed: int = 0
    backtrack_steps: int = 8
    refit_attempts: int = 10
    refit_fraction: float = 0.5

    def __post_init__(self):
        if self.num_trees < 0:
            raise ValueError("num_trees must be >= 0")
        if not (0.0 < self.shrinkage <= 1.0):
            raise ValueError("shrinkage must lie in (0, 1]")
        if self.max_leaves < 1 or self.min_instances_per_leaf < 1 or self.truncation < 1:
            raise ValueError("max_leaves, min_instances_per_leaf and truncation must be positive")
        if self.backtrack_steps < 0 or self.refit_attempts < 0:
            raise ValueError("backtrack_steps and refit_attempts must be >= 0")
        if not (0.0 < self.refit_fraction <= 1.0):
            raise ValueError("refit_fraction must lie in (0, 1]")


@dataclass
class RankingEnsemble:
    """``score(x) = base_score + shrinkage * sum(tree(x))``."""

    feature_names: Tuple[str, ...]
    shrinkage: float = 0.1
    base_score: float = 0.0
    trees: List[RegressionTree] = field(default_factory=list)
    history: List[float] = field(default_factory=list, compare=False)

    @property
    def n_features(self) -> int:
        return len(self.feature_names)

    def score(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        if X.shape[1] != self.n_features:
            raise ValueError(f"expected {self.n_features} features, got {X.shape[1]}")
        out = np.full(len(X), self.base_score)
        for t in self.trees:
            out += self.shrinkage * t.predict(X)
        return out

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(dumps_model(self))

    @classmethod
    def load(cls, path) -> "RankingEnsemble":
        with open(path, encoding="utf-8") as fh:
            return loads_model(fh.read())


def _group_arrays(instances: Sequence[TrainingInstance]):
    ordered = sorted(instances, key=lambda r: (term_key(r.user), term_key(r.item)))
    if not ordered:
        raise UntrainableError("untrainable: no training instances")
    names = ordered[0].features.names
    X = np.array([r.features.values for r in ordered], dtype=np.float64)
    y = np.array([r.label for r in ordered], dtype=np.float64)
    groups, start = [], 0
    for k in range(1, len(ordered) + 1):
        if k == len(ordered) or ordered[k].user != ordered[start].user:
            groups.append(np.arange(start, k))
            start = k
    return names, X, y, groups


def mean_ndcg(y, scores, groups, truncation: int) -> float:
    vals = [ndcg_at(y[g], scores[g], truncation) for g in groups if y[g].max() > 0]
    return float(np.mean(vals)) if vals else 0.0


def _accepted_step(y, scores, groups, current, tree, leaves, cfg):
    """Largest ``0.5**k`` multiplier (k <= backtrack_steps) keeping NDCG from falling.

    Trial scores use the same arithmetic as :meth:`RankingEnsemble.score`
    on the rescaled tree, so the accepted NDCG is exactly reproducible.
    """
    scale = 1.0
    for k in range(cfg.backtrack_steps + 1):
        trial = scores + cfg.shrinkage * (tree.value * scale)[leaves]
        value = mean_ndcg(y, trial, groups, cfg.truncation)
        if value >= current:
            return scale, trial, value
        scale *= 0.5
    return None, None, None


def fit_lambdamart(X, y, groups, cfg: LambdaMartConfig, feature_names: Sequence[str]) -> RankingEnsemble:
    """Boosting loop on pre-built arrays; ``groups`` is a list of row-index arrays.

    Every round computes lambdas per group, fits a tree to them and adds it
    with step ``shrinkage``.  Training NDCG@truncation is kept
    non-decreasing: a step that lowers it is halved up to
    ``backtrack_steps`` times, and if that fails the tree is refitted on a
    seeded random ``refit_fraction`` of the groups (up to ``refit_attempts``
    times).  If every candidate fails, boosting stops early.  Setting
    ``backtrack_steps=0`` and ``refit_attempts=0`` turns the safeguard off
    and gives plain LambdaMART.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if not any(len(np.unique(y[g])) > 1 for g in groups):
        raise UntrainableError("untrainable: degenerate labels")
    guarded = cfg.backtrack_steps > 0 or cfg.refit_attempts > 0
    rng = np.random.default_rng(cfg.seed)
    model = RankingEnsemble(tuple(feature_names), cfg.shrinkage, 0.0)
    scores = np.full(len(y), model.base_score)
    current = mean_ndcg(y, scores, groups, cfg.truncation)
    model.history.append(current)
    lam = np.zeros(len(y))
    hess = np.zeros(len(y))
    all_rows = np.arange(len(y))
    for m in range(cfg.num_trees):
        for g in groups:
            lam[g], hess[g] = lambda_gradients(y[g], scores[g], cfg.truncation)
        accepted = None
        for attempt in range(cfg.refit_attempts + 1 if guarded else 1):
            rows = all_rows
            if attempt:
                pick = rng.random(len(groups)) < cfg.refit_fraction
                if pick.any():
                    rows = np.concatenate([g for g, p in zip(groups, pick) if p])
            tree = fit_regression_tree(X[rows], lam[rows], hess[rows], cfg.max_leaves, cfg.min_instances_per_leaf)
            leaves = tree.apply(X)
            if not guarded:
                trial = scores + cfg.shrinkage * tree.value[leaves]
                accepted = (tree, 1.0, trial, mean_ndcg(y, trial, groups, cfg.truncation))
                break
            scale, trial, value = _accepted_step(y, scores, groups, current, tree, leaves, cfg)
            if scale is not None:
                accepted = (tree, scale, trial, value)
                break
        if accepted is None:
            logger.debug("stopping after %d trees: no candidate keeps training NDCG", m)
            break
        tree, scale, scores, current = accepted
        if scale != 1.0:
            tree.value = tree.value * scale
        model.trees.append(tree)
        model.history.append(current)
        if (m + 1) % 50 == 0:
            logger.debug("tree %d: train NDCG@%d = %.4f", m + 1, cfg.truncation, current)
    return model


def train_lambdamart(instances: Sequence[TrainingInstance], cfg: LambdaMartConfig = LambdaMartConfig()) -> RankingEnsemble:
    """Train on instances grouped by user (one query group per user)."""
    names, X, y, groups = _group_arrays(instances)
    return fit_lambdamart(X, y, groups, cfg, names)


def training_ndcg(model: RankingEnsemble, instances: Sequence[TrainingInstance], k: int) -> float:
    _, X, y, groups = _group_arrays(instances)
    return mean_ndcg(y, model.score(X), groups, k)


def rank_items(scores: Mapping[Term, float], n: int, exclusions: Iterable[Term] = ()) -> List[Tuple[Term, float]]:
    """Highest ``n`` scores, descending, ties broken lexically; excluded items never appear."""
    if n < 1:
        raise ValueError("n must be positive")
    excluded = set(exclusions)
    kept = [(item, float(s)) for item, s in scores.items() if item not in excluded]
    kept.sort(key=lambda kv: (-kv[1], term_key(kv[0])))
    return kept[:n]


def score_candidates(model: RankingEnsemble, user: Term, candidates: Sequence[Term], spaces) -> Dict[Term, float]:
    items = list(candidates)
    if not items:
        return {}
    return dict(zip(items, model.score(feature_matrix(user, items, spaces)).tolist()))


def top_n(
    model: RankingEnsemble,
    user: Term,
    candidates: Iterable[Term],
    n: int,
    exclusions: Iterable[Term] = (),
    spaces=None,
) -> List[Tuple[Term, float]]:
    """Rank ``candidates`` minus ``exclusions`` for ``user`` and keep the best ``n``."""
    candidates = sorted(set(candidates), key=term_key)
    if not candidates:
        raise ValueError("no candidates")
    if spaces is None:
        raise ValueError("embedding spaces are required to build features")
    excluded = set(exclusions)
    pool = [c for c in candidates if c not in excluded]
    return rank_items(score_candidates(model, user, pool, spaces), n)


def feature_importance(model: RankingEnsemble) -> np.ndarray:
    """Total split gain per feature, normalised to sum to 1.

    A model without any split gives an all-zero vector and a
    :class:`NoSplitsWarning`.
    """
    imp = np.zeros(model.n_features)
    for t in model.trees:
        internal = t.feature != LEAF
        np.add.at(imp, t.feature[internal], t.gain[internal])
    total = imp.sum()
    if total <= 0.0:
        warnings.warn("model has no splits; importance undefined", NoSplitsWarning, stacklevel=2)
        return np.zeros(model.n_features)
    return imp / total


def dumps_model(model: RankingEnsemble) -> str:
    """Text dump: header lines then each tree in pre-order.

    Internal nodes are ``node <feature> <threshold> <gain>`` and leaves
    ``leaf <value>``; children follow their parent left subtree first.
    """
    for n in model.feature_names:
        if not n or any(c.isspace() for c in n):
            raise ValueError(f"feature name {n!r} must be a non-empty token")
    lines = [
        f"kgrec-lambdamart {FORMAT_VERSION}",
        "features " + " ".join(model.feature_names),
        f"shrinkage {model.shrinkage!r}",
        f"base_score {float(model.base_score)!r}",
        f"trees {len(model.trees)}",
    ]
    for t in model.trees:
        lines.append(f"tree {t.n_nodes}")
        for k in t.preorder():
            if t.feature[k] == LEAF:
                lines.append(f"leaf {float(t.value[k])!r}")
            else:
                lines.append(f"node {int(t.feature[k])} {float(t.threshold[k])!r} {float(t.gain[k])!r}")
    return "\n".join(lines) + "\n"


def _parse_tree(tokens: List[List[str]], pos: int):
    feature, threshold, left, right, value, gain = [], [], [], [], [], []

    def build(p):
        k = len(feature)
        parts = tokens[p]
        feature.append(LEAF)
        threshold.append(0.0)
        left.append(-1)
        right.append(-1)
        value.append(0.0)
        gain.append(0.0)
        if parts[0] == "leaf":
            value[k] = float(parts[1])
            return p + 1
        if parts[0] != "node":
            raise ValueError(f"expected node or leaf, got {parts[0]!r}")
        feature[k] = int(parts[1])
        threshold[k] = float(parts[2])
        gain[k] = float(parts[3]) if len(parts) > 3 else 0.0
        left[k] = len(feature)
        p = build(p + 1)
        right[k] = len(feature)
        return build(p)

    end = build(pos)
    tree = RegressionTree(
        np.array(feature, dtype=np.int64), np.array(threshold), np.array(left, dtype=np.int64),
        np.array(right, dtype=np.int64), np.array(value), np.array(gain),
    )
    tree.check()
    return tree, end


def loads_model(text: str) -> RankingEnsemble:
    rows = [ln.split() for ln in text.splitlines() if ln.strip()]
    if not rows or rows[0][0] != "kgrec-lambdamart":
        raise ValueError("not a kgrec LambdaMART model file")
    if int(rows[0][1]) != FORMAT_VERSION:
        raise ValueError(f"unsupported model format version {rows[0][1]}")
    header = {r[0]: r[1:] for r in rows[1:5]}
    model = RankingEnsemble(
        tuple(header["features"]), float(header["shrinkage"][0]), float(header["base_score"][0])
    )
    n_trees = int(header["trees"][0])
    pos = 5
    for _ in range(n_trees):
        if rows[pos][0] != "tree":
            raise ValueError("expected tree header")
        tree, pos = _parse_tree(rows, pos + 1)
        if int(rows[pos - tree.n_nodes - 1][1]) != tree.n_nodes:
            raise ValueError("tree node count mismatch")
        model.trees.append(tree)
    return model
