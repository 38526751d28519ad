"""Word- and triple-level similarity scores in ``[0, 1]``."""

from __future__ import annotations

import math
from typing import Sequence

from ..graph import Triple
from .words import WordVectorProvider, tokenize_triple


def word_triple_similarity(word: str, words: Sequence[str], wv: WordVectorProvider) -> float:
    """Best similarity between ``word`` and any word of a tokenized triple."""
    if len(words) == 0:
        raise ValueError("empty word list")
    return max(wv.similarity(word, w) for w in words)


def triple_similarity(a: Triple, b: Triple, wv: WordVectorProvider) -> float:
    """Symmetric mean of best-match word similarities across both token lists."""
    m1, m2 = tokenize_triple(a), tokenize_triple(b)
    if not m1 or not m2:
        raise ValueError(f"triple tokenizes to no words: {a if not m1 else b}")
    total = sum(word_triple_similarity(w, m2, wv) for w in m1)
    total += sum(word_triple_similarity(w, m1, wv) for w in m2)
    return min(1.0, max(0.0, total / (len(m1) + len(m2))))


def numeric_match(u: float, v: float) -> float:
    """``min / max`` of two non-negative values; 1 when both are zero."""
    u, v = float(u), float(v)
    if not (math.isfinite(u) and math.isfinite(v)):
        raise ValueError("numeric values must be finite")
    if u < 0 or v < 0:
        raise ValueError("numeric values must be non-negative")
    hi = max(u, v)
    if hi == 0.0:
        return 1.0
    return min(u, v) / hi
