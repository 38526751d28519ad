"""Triple tokenization and word vectors for semantic matching."""

from __future__ import annotations

import re
from typing import Dict, Iterable, List, Mapping, Optional

import numpy as np

from ..embeddings import EmbeddingSpace, TrainConfig, train_skipgram
from ..graph import Term, Triple

_SPLIT = re.compile(r"[^0-9A-Za-z]+")


def tokenize_term(term: Term) -> List[str]:
    text = term.local_name if term.is_iri else term.value
    return [w.lower() for w in _SPLIT.split(text) if w]


def tokenize_triple(t: Triple) -> List[str]:
    """Distinct lowercased words of the predicate local name and the object, first-seen order."""
    words = tokenize_term(t.predicate) + tokenize_term(t.object)
    return list(dict.fromkeys(words))


class WordVectorProvider:
    """Unit-normalised word vectors; unknown words only match themselves."""

    def __init__(self, vectors: Mapping[str, np.ndarray]):
        words = sorted(vectors)
        if words:
            mat = np.array([np.asarray(vectors[w], dtype=np.float64) for w in words])
            if mat.ndim != 2:
                raise ValueError("word vectors must share one dimension")
            if not np.isfinite(mat).all():
                raise ValueError("word vectors must be finite")
            norms = np.linalg.norm(mat, axis=1)
            if np.any(norms == 0.0):
                raise ValueError(f"zero vector for word {words[int(np.argmin(norms))]!r}")
            mat = mat / norms[:, None]
        else:
            mat = np.zeros((0, 0))
        self.words = tuple(words)
        self.matrix = mat
        self._index: Dict[str, int] = {w: i for i, w in enumerate(words)}

    def __contains__(self, word) -> bool:
        return word in self._index

    def __len__(self) -> int:
        return len(self.words)

    @property
    def dimension(self) -> int:
        return self.matrix.shape[1]

    def vector(self, word: str) -> Optional[np.ndarray]:
        i = self._index.get(word)
        return None if i is None else self.matrix[i]

    def similarity(self, a: str, b: str) -> float:
        """Cosine of the two words clamped to ``[0, 1]``; exact string match when either is unknown."""
        if a == b:
            return 1.0
        ia, ib = self._index.get(a), self._index.get(b)
        if ia is None or ib is None:
            return 0.0
        c = float(self.matrix[ia] @ self.matrix[ib])
        return min(1.0, max(0.0, c))

    @classmethod
    def from_space(cls, space: EmbeddingSpace) -> "WordVectorProvider":
        vecs = {}
        for e in space.entities:
            key = e if isinstance(e, str) else str(getattr(e, "value", e))
            v = space[e]
            if np.linalg.norm(v) > 0:
                vecs[key] = v
        return cls(vecs)


def triple_sentences(triples: Iterable[Triple]) -> List[List[str]]:
    """One token sentence per triple with at least two distinct words, in sorted triple order."""
    out = []
    for t in sorted(set(triples), key=lambda t: t.n3()):
        words = tokenize_triple(t)
        if len(words) >= 2:
            out.append(words)
    return out


def train_word_vectors(triples: Iterable[Triple], cfg: Optional[TrainConfig] = None) -> WordVectorProvider:
    """Skip-gram word vectors over the tokenized triples of a graph."""
    sentences = triple_sentences(triples)
    if not sentences:
        return WordVectorProvider({})
    if cfg is None:
        cfg = TrainConfig(dimension=32, window=5, epochs=5, seed=0)
    space = train_skipgram(sentences, cfg, relation="words")
    return WordVectorProvider.from_space(space)
