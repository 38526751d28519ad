"""Least-squares regression trees grown best-first, with Newton leaf values."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

LEAF = -1
NEWTON_EPS = 1e-9


@dataclass
class RegressionTree:
    """Array-encoded binary tree; ``feature[k] == -1`` marks a leaf.

    Instances with ``x[feature] <= threshold`` go left.  ``gain`` holds the
    squared-error reduction achieved by each internal node's split.
    """

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray
    gain: np.ndarray

    @property
    def n_leaves(self) -> int:
        return int(np.sum(self.feature == LEAF))

    @property
    def n_nodes(self) -> int:
        return len(self.feature)

    def predict(self, X) -> np.ndarray:
        return self.value[self.apply(X)]

    def apply(self, X) -> np.ndarray:
        """Leaf node id reached by each row."""
        X = np.asarray(X, dtype=np.float64)
        node = np.zeros(len(X), dtype=np.int64)
        active = self.feature[node] != LEAF
        while active.any():
            rows = np.nonzero(active)[0]
            cur = node[rows]
            go_left = X[rows, self.feature[cur]] <= self.threshold[cur]
            node[rows] = np.where(go_left, self.left[cur], self.right[cur])
            active = self.feature[node] != LEAF
        return node

    def preorder(self):
        """Yield node ids in pre-order (node, left subtree, right subtree)."""
        stack = [0]
        while stack:
            k = stack.pop()
            yield k
            if self.feature[k] != LEAF:
                stack.append(self.right[k])
                stack.append(self.left[k])

    def check(self, max_leaves=None) -> None:
        internal = self.feature != LEAF
        if np.any(internal & ((self.left < 0) | (self.right < 0))):
            raise ValueError("internal node without two children")
        if not np.isfinite(self.threshold[internal]).all():
            raise ValueError("non-finite threshold")
        if max_leaves is not None and self.n_leaves > max_leaves:
            raise ValueError("too many leaves")


def min_gain(y) -> float:
    """Splits must beat this to count; guards against round-off on constant targets."""
    return 1e-12 * max(1.0, float(np.dot(y, y)))


def best_split(X, y, idx, min_leaf: int):
    """Best ``(gain, feature, threshold, left_idx, right_idx)`` for rows ``idx``, or ``None``.

    Ties go to the lower feature index, then the lower threshold.
    """
    n = len(idx)
    if n < 2 * min_leaf:
        return None
    yi = y[idx]
    total = yi.sum()
    base = total * total / n
    floor = min_gain(yi)
    best = None
    cut = np.arange(min_leaf - 1, n - min_leaf)
    nl = cut + 1.0
    nr = n - nl
    for f in range(X.shape[1]):
        xs = X[idx, f]
        order = np.argsort(xs, kind="stable")
        xs_sorted = xs[order]
        csum = np.cumsum(yi[order])
        valid = xs_sorted[cut] < xs_sorted[cut + 1]
        if not valid.any():
            continue
        sl = csum[cut]
        gains = sl * sl / nl + (total - sl) ** 2 / nr - base
        gains = np.where(valid, gains, -np.inf)
        i = int(np.argmax(gains))
        g = float(gains[i])
        if g > floor and (best is None or g > best[0]):
            lo, hi = xs_sorted[cut[i]], xs_sorted[cut[i] + 1]
            thr = 0.5 * (lo + hi)
            if not (lo <= thr < hi):
                thr = lo
            mask = xs <= thr
            best = (g, f, float(thr), idx[mask], idx[~mask])
    return best


def fit_regression_tree(X, targets, weights, max_leaves: int = 10, min_instances: int = 1) -> RegressionTree:
    """Greedy best-first least-squares tree on ``targets``.

    The leaf with the largest available gain is split next (earliest-created
    leaf on ties) until ``max_leaves`` is reached or no split clears
    :func:`min_gain`.  Leaf values are ``sum(targets) / (sum(weights) + 1e-9)``.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(targets, dtype=np.float64)
    w = np.asarray(weights, dtype=np.float64)
    if X.ndim != 2 or len(X) == 0:
        raise ValueError("need a non-empty 2-d feature matrix")
    if not (len(X) == len(y) == len(w)):
        raise ValueError("features, targets and weights differ in length")
    if max_leaves < 1 or min_instances < 1:
        raise ValueError("max_leaves and min_instances must be >= 1")

    feature, threshold, left, right, gain, rows = [LEAF], [0.0], [-1], [-1], [0.0], [np.arange(len(X))]
    pending = {0: best_split(X, y, rows[0], min_instances)}
    n_leaves = 1
    while n_leaves < max_leaves:
        choice = None
        for k in sorted(pending):
            s = pending[k]
            if s is not None and (choice is None or s[0] > pending[choice][0]):
                choice = k
        if choice is None:
            break
        g, f, thr, li, ri = pending.pop(choice)
        for child_rows in (li, ri):
            feature.append(LEAF)
            threshold.append(0.0)
            left.append(-1)
            right.append(-1)
            gain.append(0.0)
            rows.append(child_rows)
            pending[len(rows) - 1] = best_split(X, y, child_rows, min_instances)
        feature[choice], threshold[choice], gain[choice] = f, thr, g
        left[choice], right[choice] = len(rows) - 2, len(rows) - 1
        n_leaves += 1

    value = np.zeros(len(feature))
    for k, r in enumerate(rows):
        if feature[k] == LEAF:
            value[k] = y[r].sum() / (w[r].sum() + NEWTON_EPS)
    return RegressionTree(
        np.array(feature, dtype=np.int64),
        np.array(threshold, dtype=np.float64),
        np.array(left, dtype=np.int64),
        np.array(right, dtype=np.int64),
        value,
        np.array(gain, dtype=np.float64),
    )
