from __future__ import annotations

from typing import Iterable, List, Mapping

import numpy as np

from ..graph import Term, term_key
from .features import FeatureVector, TrainingInstance, feature_matrix, feature_name

NEGATIVE_RATIO = 4


def build_training_set(
    positives: Mapping[Term, Iterable[Term]],
    catalog: Iterable[Term],
    spaces,
    negative_ratio: int = NEGATIVE_RATIO,
    seed: int = 0,
) -> List[TrainingInstance]:
    """Label each user's interacted items 1 and a uniform sample of the others 0.

    Up to ``negative_ratio`` negatives are drawn per positive, without
    replacement, from catalog items the user has not interacted with.
    Users are processed in lexical order from one seeded stream.
    """
    if negative_ratio < 0:
        raise ValueError("negative_ratio must be >= 0")
    catalog = sorted(set(catalog), key=term_key)
    names = tuple(feature_name(sp) for sp in spaces)
    rng = np.random.default_rng(seed)
    out: List[TrainingInstance] = []
    for user in sorted(positives, key=term_key):
        pos = sorted(set(positives[user]), key=term_key)
        if not pos:
            continue
        seen = set(pos)
        pool = [i for i in catalog if i not in seen]
        n_neg = min(len(pool), negative_ratio * len(pos))
        neg = [pool[j] for j in sorted(rng.choice(len(pool), size=n_neg, replace=False))] if n_neg else []
        items = pos + neg
        X = feature_matrix(user, items, spaces)
        for row, item in enumerate(items):
            out.append(TrainingInstance(user, item, FeatureVector(tuple(X[row].tolist()), names), int(item in seen)))
    return out
