"""Entity vector spaces, cosine similarity and the ``.emb`` text format."""

from __future__ import annotations

import re
import warnings
from dataclasses import dataclass, field
from typing import Hashable, Optional, Tuple

import numpy as np

from ..graph import parse_term, term_key
from ..graph.terms import Term


class ZeroVectorWarning(RuntimeWarning):
    pass


def cosine_similarity(a, b) -> float:
    """``a.b / (|a||b|)``; defined as 0 (with a :class:`ZeroVectorWarning`) for zero vectors."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    na = np.linalg.norm(a)
    nb = np.linalg.norm(b)
    if na == 0.0 or nb == 0.0:
        warnings.warn("cosine similarity of a zero vector taken as 0", ZeroVectorWarning, stacklevel=2)
        return 0.0
    return float(np.clip(a @ b / (na * nb), -1.0, 1.0))


@dataclass
class EmbeddingSpace:
    """Vectors for every entity of one relation-type graph.

    ``vectors`` are the input (centre) vectors used downstream; ``contexts``
    are the output vectors kept from training, or ``None`` after loading.
    """

    relation: str
    entities: Tuple[Hashable, ...]
    vectors: np.ndarray
    contexts: Optional[np.ndarray] = None
    epoch_losses: Tuple[float, ...] = ()
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        self.entities = tuple(self.entities)
        self.vectors = np.asarray(self.vectors, dtype=np.float64)
        if self.vectors.ndim != 2 or self.vectors.shape[0] != len(self.entities):
            raise ValueError("need one vector row per entity")
        if not np.isfinite(self.vectors).all():
            raise ValueError("embedding vectors must be finite")
        self._index = {e: i for i, e in enumerate(self.entities)}
        if len(self._index) != len(self.entities):
            raise ValueError("duplicate entities")

    @property
    def dimension(self) -> int:
        return self.vectors.shape[1]

    def __len__(self) -> int:
        return len(self.entities)

    def __contains__(self, entity) -> bool:
        return entity in self._index

    def __getitem__(self, entity) -> np.ndarray:
        return self.vectors[self._index[entity]]

    def get(self, entity, default=None):
        i = self._index.get(entity)
        return default if i is None else self.vectors[i]

    def similarity(self, a, b) -> float:
        return cosine_similarity(self[a], self[b])

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(dumps_space(self))

    @classmethod
    def load(cls, path, relation: str = "") -> "EmbeddingSpace":
        with open(path, encoding="utf-8") as fh:
            return loads_space(fh.read(), relation)


def _entity_token(e) -> str:
    if isinstance(e, Term):
        return e.n3(escape_space=True)
    tok = str(e)
    if not tok or re.search(r"\s", tok) or tok[0] in '<"':
        raise ValueError(f"entity {tok!r} cannot be written as a bare token")
    return tok


def dumps_space(space: EmbeddingSpace) -> str:
    lines = [f"dim {space.dimension} count {len(space)}"]
    for e, row in zip(space.entities, space.vectors):
        lines.append(" ".join([_entity_token(e), *(repr(float(v)) for v in row)]))
    return "\n".join(lines) + "\n"


def loads_space(text: str, relation: str = "") -> EmbeddingSpace:
    lines = text.splitlines()
    m = re.fullmatch(r"dim (\d+) count (\d+)", lines[0].strip()) if lines else None
    if m is None:
        raise ValueError("bad embedding header; expected 'dim <d> count <N>'")
    d, n = int(m.group(1)), int(m.group(2))
    body = [ln for ln in lines[1:] if ln.strip()]
    if len(body) != n:
        raise ValueError(f"header says {n} entities, file has {len(body)}")
    entities, rows = [], []
    for ln in body:
        key, *vals = ln.split()
        if len(vals) != d:
            raise ValueError(f"entity {key} has {len(vals)} values, expected {d}")
        entities.append(parse_term(key) if key[0] in '<"' else key)
        rows.append([float(v) for v in vals])
    return EmbeddingSpace(relation, tuple(entities), np.array(rows, dtype=np.float64).reshape(n, d))


def sanitize_relation(iri: str) -> str:
    """Filesystem-safe name for a predicate IRI."""
    return re.sub(r"[^A-Za-z0-9._-]+", "_", iri).strip("_") or "relation"


def nearest_neighbors(space: EmbeddingSpace, entity, n: int):
    """Top-``n`` other entities by cosine similarity as ``(entity, score)`` pairs.

    Ties are broken by the entities' lexical order.
    """
    if entity not in space:
        raise KeyError(f"{entity} not in embedding space")
    if n < 1:
        raise ValueError("n must be positive")
    v = space[entity]
    norms = np.linalg.norm(space.vectors, axis=1)
    nv = np.linalg.norm(v)
    with np.errstate(invalid="ignore", divide="ignore"):
        sims = np.where((norms > 0) & (nv > 0), space.vectors @ v / (norms * nv), 0.0)
    sims = np.clip(sims, -1.0, 1.0)
    scored = [(e, float(s)) for e, s in zip(space.entities, sims) if e != entity]
    scored.sort(key=lambda es: (-es[1], term_key(es[0])))
    return scored[:n]
