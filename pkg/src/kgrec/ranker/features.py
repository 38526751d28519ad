from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from ..embeddings import EmbeddingSpace, cosine_similarity
from ..graph import IRI, Term


def feature_name(space: EmbeddingSpace) -> str:
    if not space.relation:
        return "relation"
    try:
        return IRI(space.relation).local_name
    except ValueError:
        return space.relation


@dataclass(frozen=True)
class FeatureVector:
    values: Tuple[float, ...]
    names: Tuple[str, ...]

    def __post_init__(self):
        if len(self.values) != len(self.names):
            raise ValueError("values and names differ in length")

    def __len__(self) -> int:
        return len(self.values)

    def as_array(self) -> np.ndarray:
        return np.array(self.values, dtype=np.float64)


@dataclass(frozen=True)
class TrainingInstance:
    user: Term
    item: Term
    features: FeatureVector
    label: int

    def __post_init__(self):
        if self.label not in (0, 1):
            raise ValueError("label must be 0 or 1")


def build_features(user: Term, item: Term, spaces: Sequence[EmbeddingSpace]) -> FeatureVector:
    """One cosine similarity per relation space; 0 where either entity is missing."""
    if not spaces:
        raise ValueError("need at least one embedding space")
    values = []
    for sp in spaces:
        u = sp.get(user)
        i = sp.get(item)
        values.append(0.0 if u is None or i is None else cosine_similarity(u, i))
    return FeatureVector(tuple(values), tuple(feature_name(sp) for sp in spaces))


def feature_matrix(user: Term, items: Sequence[Term], spaces: Sequence[EmbeddingSpace]) -> np.ndarray:
    """Vectorised :func:`build_features` for many items of one user, shape ``(len(items), len(spaces))``."""
    if not spaces:
        raise ValueError("need at least one embedding space")
    out = np.zeros((len(items), len(spaces)))
    for col, sp in enumerate(spaces):
        u = sp.get(user)
        if u is None:
            continue
        nu = np.linalg.norm(u)
        if nu == 0.0:
            continue
        for row, item in enumerate(items):
            v = sp.get(item)
            if v is None:
                continue
            nv = np.linalg.norm(v)
            if nv > 0.0:
                out[row, col] = min(1.0, max(-1.0, float(u @ v / (nu * nv))))
    return out
