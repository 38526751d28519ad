"""Skip-gram with negative sampling over walk corpora.

For a (center, context) pair with sampled negatives ``n_1..n_k`` the
maximised objective is::

    log sigmoid(x_center . c_context) + sum_j log sigmoid(-x_center . c_nj)

where ``x`` are input vectors and ``c`` context (output) vectors.  Updates
are plain SGD ascent with a linearly decaying learning rate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Hashable, List, Optional, Sequence

import numba
import numpy as np

from ..graph import term_key
from .space import EmbeddingSpace

_MAX_CHUNK_PAIRS = 400_000


class TrainingDiverged(FloatingPointError):
    def __init__(self, step: int):
        self.step = step
        super().__init__(f"non-finite objective at training step {step}")


@dataclass(frozen=True)
class TrainConfig:
    dimension: int = 100
    window: int = 10
    negatives: int = 5
    learning_rate: float = 0.025
    min_learning_rate: float = 0.0001
    epochs: int = 5
    seed: int = 0
    track_loss: bool = False

    def __post_init__(self):
        if self.dimension < 2:
            raise ValueError("dimension must be >= 2")
        if self.window < 1 or self.negatives < 1:
            raise ValueError("window and negatives must be >= 1")
        if self.epochs < 0:
            raise ValueError("epochs must be >= 0")
        if not (0 < self.min_learning_rate <= self.learning_rate):
            raise ValueError("need 0 < min_learning_rate <= learning_rate")


class NegativeSampler:
    """Draws negatives with probability proportional to ``count ** power``."""

    def __init__(self, vocabulary: Sequence[Hashable], counts: Sequence[float], seed: int = 0, power: float = 0.75):
        if len(vocabulary) == 0:
            raise ValueError("empty vocabulary")
        counts = np.asarray(counts, dtype=np.float64)
        if counts.shape != (len(vocabulary),) or np.any(counts <= 0):
            raise ValueError("need one positive count per vocabulary entry")
        self.vocabulary = list(vocabulary)
        w = counts**power
        self.weights = w / w.sum()
        self._cdf = np.cumsum(self.weights)
        self._cdf[-1] = 1.0
        self.seed = seed
        self.rng = np.random.default_rng(seed)

    @classmethod
    def from_walks(cls, walks, seed: int = 0, power: float = 0.75) -> "NegativeSampler":
        counts = {}
        for walk in walks:
            for tok in walk:
                counts[tok] = counts.get(tok, 0) + 1
        vocab = sorted(counts, key=term_key)
        return cls(vocab, [counts[v] for v in vocab], seed=seed, power=power)

    def draw(self, size) -> np.ndarray:
        """Vocabulary indices of ``size`` independent draws."""
        return np.searchsorted(self._cdf, self.rng.random(size), side="right").clip(0, len(self.vocabulary) - 1)


# --- reference objective and gradients (numpy, used for verification) -------


def _log_sigmoid(z):
    return -np.logaddexp(0.0, -z)


def sgns_objective(w_in, w_out, center: int, context: int, negatives) -> float:
    x = w_in[center]
    obj = _log_sigmoid(x @ w_out[context])
    for n in negatives:
        obj += _log_sigmoid(-(x @ w_out[n]))
    return float(obj)


def sgns_gradients(w_in, w_out, center: int, context: int, negatives):
    """Gradient of :func:`sgns_objective` w.r.t. both full matrices."""
    x = w_in[center]
    g_in = np.zeros_like(w_in)
    g_out = np.zeros_like(w_out)
    targets = [context, *negatives]
    labels = [1.0] + [0.0] * len(negatives)
    for t, label in zip(targets, labels):
        coef = label - 1.0 / (1.0 + math.exp(-(x @ w_out[t])))
        g_in[center] += coef * w_out[t]
        g_out[t] += coef * x
    return g_in, g_out


# --- compiled training kernel -----------------------------------------------


@numba.njit(cache=True)
def _log_sig(z):
    if z >= 0:
        return -math.log1p(math.exp(-z))
    return z - math.log1p(math.exp(z))


@numba.njit(cache=True)
def sgd_pair(w_in, w_out, center, targets, lr, coef, neu):
    """One ascent step; ``targets[0]`` is the positive context.  Returns the objective."""
    d = w_in.shape[1]
    obj = 0.0
    for j in range(targets.shape[0]):
        t = targets[j]
        dot = 0.0
        for a in range(d):
            dot += w_in[center, a] * w_out[t, a]
        if j == 0:
            obj += _log_sig(dot)
            coef[j] = 1.0 - 1.0 / (1.0 + math.exp(-dot))
        else:
            obj += _log_sig(-dot)
            coef[j] = -1.0 / (1.0 + math.exp(-dot))
    for a in range(d):
        neu[a] = 0.0
    for j in range(targets.shape[0]):
        t = targets[j]
        for a in range(d):
            neu[a] += coef[j] * w_out[t, a]
    for j in range(targets.shape[0]):
        t = targets[j]
        g = lr * coef[j]
        for a in range(d):
            w_out[t, a] += g * w_in[center, a]
    for a in range(d):
        w_in[center, a] += lr * neu[a]
    return obj


@numba.njit(cache=True)
def _pairs_per_walk(offsets, window):
    out = np.zeros(offsets.shape[0] - 1, dtype=np.int64)
    for w in range(offsets.shape[0] - 1):
        a, b = offsets[w], offsets[w + 1]
        total = 0
        for i in range(a, b):
            total += min(b, i + window + 1) - max(a, i - window) - 1
        out[w] = total
    return out


@numba.njit(cache=True)
def _train_walks(w_in, w_out, corpus, offsets, w_lo, w_hi, window, negs, step0, total_steps, lr0, lr_min):
    k = negs.shape[1]
    targets = np.empty(k + 1, dtype=np.int64)
    coef = np.empty(k + 1)
    neu = np.empty(w_in.shape[1])
    step = step0
    pair = 0
    obj_sum = 0.0
    for w in range(w_lo, w_hi):
        a, b = offsets[w], offsets[w + 1]
        for i in range(a, b):
            lo = max(a, i - window)
            hi = min(b, i + window + 1)
            for j in range(lo, hi):
                if j == i:
                    continue
                lr = lr0 * (1.0 - step / total_steps)
                if lr < lr_min:
                    lr = lr_min
                targets[0] = corpus[j]
                for m in range(k):
                    targets[m + 1] = negs[pair, m]
                obj = sgd_pair(w_in, w_out, corpus[i], targets, lr, coef, neu)
                if not math.isfinite(obj):
                    return obj_sum, step, step
                obj_sum += obj
                pair += 1
                step += 1
    return obj_sum, step, -1


@numba.njit(cache=True)
def _objective_walks(w_in, w_out, corpus, offsets, w_lo, w_hi, window, negs):
    d = w_in.shape[1]
    k = negs.shape[1]
    pair = 0
    obj_sum = 0.0
    for w in range(w_lo, w_hi):
        a, b = offsets[w], offsets[w + 1]
        for i in range(a, b):
            c = corpus[i]
            for j in range(max(a, i - window), min(b, i + window + 1)):
                if j == i:
                    continue
                dot = 0.0
                for q in range(d):
                    dot += w_in[c, q] * w_out[corpus[j], q]
                obj_sum += _log_sig(dot)
                for m in range(k):
                    dot = 0.0
                    for q in range(d):
                        dot += w_in[c, q] * w_out[negs[pair, m], q]
                    obj_sum += _log_sig(-dot)
                pair += 1
    return obj_sum


def initial_vectors(n: int, dimension: int, seed: int) -> np.ndarray:
    """Uniform in [-0.5/d, 0.5/d]; this is what ``epochs=0`` returns."""
    rng = np.random.default_rng(seed)
    return (rng.random((n, dimension)) - 0.5) / dimension


def train_skipgram(
    walks: Sequence[Sequence[Hashable]],
    cfg: TrainConfig = TrainConfig(),
    sampler: Optional[NegativeSampler] = None,
    relation: str = "",
) -> EmbeddingSpace:
    """Fit input/context vectors for every token appearing in ``walks``.

    Single-threaded and bit-for-bit reproducible for a fixed ``cfg.seed`` and
    sampler seed.  When ``sampler`` is omitted one is built from the walk
    frequencies, seeded from ``cfg.seed``.

    ``epoch_losses`` of the result holds, per epoch, the mean negated
    objective.  With ``cfg.track_loss`` it is evaluated after the epoch over
    every pair against one fixed negative draw, so successive values are
    comparable; otherwise it is the cheaper running mean seen during SGD.
    """
    vocab = sorted({tok for walk in walks for tok in walk}, key=term_key)
    if not vocab:
        raise ValueError("empty vocabulary: no tokens in walks")
    index = {tok: i for i, tok in enumerate(vocab)}
    if sampler is None:
        sampler = NegativeSampler.from_walks(walks, seed=cfg.seed + 1)
    try:
        remap = np.array([index[tok] for tok in sampler.vocabulary], dtype=np.int64)
    except KeyError as exc:
        raise ValueError(f"sampler vocabulary has token {exc.args[0]!r} not present in walks") from None

    lengths = np.array([len(w) for w in walks], dtype=np.int64)
    offsets = np.zeros(len(walks) + 1, dtype=np.int64)
    np.cumsum(lengths, out=offsets[1:])
    corpus = np.fromiter((index[tok] for walk in walks for tok in walk), dtype=np.int64, count=int(offsets[-1]))

    d = cfg.dimension
    w_in = initial_vectors(len(vocab), d, cfg.seed)
    w_out = np.zeros((len(vocab), d))
    per_walk = _pairs_per_walk(offsets, cfg.window)
    pairs_per_epoch = int(per_walk.sum())
    total_steps = max(1, pairs_per_epoch * cfg.epochs)

    # walk ranges whose pair count fits one negative-sample buffer
    bounds: List[tuple] = []
    start, acc = 0, 0
    for w, c in enumerate(per_walk.tolist()):
        if acc and acc + c > _MAX_CHUNK_PAIRS:
            bounds.append((start, w, acc))
            start, acc = w, 0
        acc += c
    if acc:
        bounds.append((start, len(walks), acc))

    losses = []
    step = 0
    for _ in range(cfg.epochs):
        obj_total = 0.0
        for lo, hi, n_pairs in bounds:
            negs = remap[sampler.draw((n_pairs, cfg.negatives))]
            obj, step, bad = _train_walks(
                w_in, w_out, corpus, offsets, lo, hi, cfg.window, negs,
                step, total_steps, cfg.learning_rate, cfg.min_learning_rate,
            )
            if bad >= 0:
                raise TrainingDiverged(bad)
            obj_total += obj
        if cfg.track_loss:
            eval_rng = np.random.default_rng([cfg.seed, 7919])
            obj_total = 0.0
            for lo, hi, n_pairs in bounds:
                idx = np.searchsorted(sampler._cdf, eval_rng.random((n_pairs, cfg.negatives)), side="right")
                negs = remap[idx.clip(0, len(remap) - 1)]
                obj_total += _objective_walks(w_in, w_out, corpus, offsets, lo, hi, cfg.window, negs)
        losses.append(-obj_total / max(1, pairs_per_epoch))
    if not (np.isfinite(w_in).all() and np.isfinite(w_out).all()):
        raise TrainingDiverged(step)
    return EmbeddingSpace(relation, tuple(vocab), w_in, w_out, tuple(losses))
