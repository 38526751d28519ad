"""LambdaRank gradients for NDCG@k on a single query group."""

from __future__ import annotations

import numpy as np


def rank_positions(scores) -> np.ndarray:
    """0-based rank of each instance when sorted by descending score (stable on ties)."""
    scores = np.asarray(scores, dtype=np.float64)
    order = np.argsort(-scores, kind="stable")
    pos = np.empty(len(scores), dtype=np.int64)
    pos[order] = np.arange(len(scores))
    return pos


def _discounts(positions, truncation: int) -> np.ndarray:
    positions = np.asarray(positions)
    return np.where(positions < truncation, 1.0 / np.log2(positions + 2.0), 0.0)


def ideal_dcg(labels, truncation: int) -> float:
    gains = np.sort(2.0 ** np.asarray(labels, dtype=np.float64) - 1.0)[::-1][:truncation]
    return float(np.sum(gains / np.log2(np.arange(len(gains)) + 2.0)))


def ndcg_at(labels, scores, truncation: int) -> float:
    """NDCG@truncation of the ranking induced by ``scores``; 0 when there is nothing relevant."""
    labels = np.asarray(labels, dtype=np.float64)
    idcg = ideal_dcg(labels, truncation)
    if idcg == 0.0:
        return 0.0
    gains = 2.0**labels - 1.0
    return float(np.sum(gains * _discounts(rank_positions(scores), truncation)) / idcg)


def swap_deltas(labels, scores, truncation: int) -> np.ndarray:
    """``|Delta NDCG|`` matrix for swapping the ranks of every pair ``(i, j)``."""
    labels = np.asarray(labels, dtype=np.float64)
    idcg = ideal_dcg(labels, truncation)
    n = len(labels)
    if idcg == 0.0:
        return np.zeros((n, n))
    gains = 2.0**labels - 1.0
    disc = _discounts(rank_positions(scores), truncation)
    return np.abs(np.subtract.outer(gains, gains) * np.subtract.outer(disc, disc)) / idcg


def lambda_gradients(labels, scores, truncation: int = 10):
    """Per-instance ``(lambdas, weights)`` for one group.

    For each pair with ``label_i > label_j`` and ``rho = 1 / (1 + exp(s_i - s_j))``
    the pair adds ``|dNDCG| * rho`` to ``lambda_i`` and subtracts it from
    ``lambda_j``; both get ``|dNDCG| * rho * (1 - rho)`` added to their weight.
    Positive lambdas push a score up.
    """
    labels = np.asarray(labels, dtype=np.float64)
    scores = np.asarray(scores, dtype=np.float64)
    n = len(labels)
    if n == 0:
        raise ValueError("empty group")
    lam = np.zeros(n)
    w = np.zeros(n)
    better = labels[:, None] > labels[None, :]
    if not better.any():
        return lam, w
    delta = swap_deltas(labels, scores, truncation)
    diff = np.subtract.outer(scores, scores)
    rho = 0.5 * (1.0 - np.tanh(0.5 * diff))  # 1 / (1 + exp(diff)) without overflow
    pair_lam = np.where(better, delta * rho, 0.0)
    pair_w = np.where(better, delta * rho * (1.0 - rho), 0.0)
    lam += pair_lam.sum(axis=1) - pair_lam.sum(axis=0)
    w += pair_w.sum(axis=1) + pair_w.sum(axis=0)
    return lam, w
