"""Top-N ranking metrics over binary relevance lists."""

from __future__ import annotations

from typing import Sequence, Tuple

import numpy as np


def _rel(ranked) -> np.ndarray:
    r = np.asarray(ranked, dtype=np.int64).reshape(-1)
    if r.size and not np.isin(r, (0, 1)).all():
        raise ValueError("relevance values must be 0 or 1")
    return r


def hits_at_k(ranked, k: int) -> int:
    if k < 1:
        raise ValueError("k must be >= 1")
    return int(_rel(ranked)[:k].sum())


def precision_at_k(ranked, k: int) -> float:
    """Relevant items among the first ``k`` divided by ``k`` (short lists count as zero-padded)."""
    return hits_at_k(ranked, k) / k


def recall_at_k(ranked, total_relevant: int, k: int) -> float:
    if total_relevant < 1:
        raise ValueError("total_relevant must be >= 1")
    return hits_at_k(ranked, k) / total_relevant


def average_precision(ranked, total_relevant: int) -> float:
    """Sum of ``P@r`` over relevant positions ``r``, divided by ``total_relevant``.

    Relevant items missing from the list contribute zero.
    """
    if total_relevant < 1:
        raise ValueError("total_relevant must be >= 1")
    acc = 0.0
    # accumulate in rank order so the result is independent of numpy's pairwise summation
    for hits, pos in enumerate(np.nonzero(_rel(ranked))[0].tolist(), start=1):
        acc += hits / (pos + 1)
    return acc / total_relevant


def mean_average_precision(lists: Sequence[Tuple[Sequence[int], int]]) -> float:
    """Mean of :func:`average_precision` over ``(ranked, total_relevant)`` pairs."""
    if len(lists) == 0:
        raise ValueError("no users to average over")
    return float(np.mean([average_precision(r, t) for r, t in lists]))
