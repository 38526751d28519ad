"""Second-order (node2vec) random walks over one relation-type graph."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, List

import numpy as np

from ..graph import KnowledgeGraph, term_key


@dataclass(frozen=True)
class WalkConfig:
    walks_per_node: int = 10
    walk_length: int = 80
    p: float = 1.0
    q: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.walks_per_node < 1 or self.walk_length < 1:
            raise ValueError("walks_per_node and walk_length must be positive")
        if not (self.p > 0 and self.q > 0):
            raise ValueError("p and q must be positive")


def undirected_adjacency(g: KnowledgeGraph) -> Dict:
    """Neighbour lists (sorted, deduplicated) treating every triple as an undirected edge."""
    nbrs: Dict = {}
    for t in g:
        nbrs.setdefault(t.subject, set())
        nbrs.setdefault(t.object, set())
        if t.subject != t.object:
            nbrs[t.subject].add(t.object)
            nbrs[t.object].add(t.subject)
    return {n: sorted(v, key=term_key) for n, v in sorted(nbrs.items(), key=lambda kv: term_key(kv[0]))}


class _Walker:
    def __init__(self, adjacency: Dict, p: float, q: float):
        self.nodes = list(adjacency)
        self.index = {n: i for i, n in enumerate(self.nodes)}
        self.nbrs = [np.array([self.index[m] for m in adjacency[n]], dtype=np.int64) for n in self.nodes]
        self.nbr_sets = [set(a.tolist()) for a in self.nbrs]
        self.p = p
        self.q = q
        self._cache: Dict = {}

    def _transition(self, prev: int, cur: int) -> np.ndarray:
        key = (prev, cur)
        cdf = self._cache.get(key)
        if cdf is None:
            prev_nbrs = self.nbr_sets[prev]
            w = np.array(
                [1.0 / self.p if x == prev else (1.0 if x in prev_nbrs else 1.0 / self.q) for x in self.nbrs[cur]]
            )
            cdf = np.cumsum(w / w.sum())
            self._cache[key] = cdf
        return cdf

    def walk(self, start: int, length: int, rng: np.random.Generator) -> List[int]:
        path = [start]
        while len(path) < length:
            cur = path[-1]
            options = self.nbrs[cur]
            if options.size == 0:
                break
            if len(path) == 1:
                nxt = options[rng.integers(options.size)]
            else:
                cdf = self._transition(path[-2], cur)
                nxt = options[min(int(np.searchsorted(cdf, rng.random(), side="right")), options.size - 1)]
            path.append(int(nxt))
        return path


def generate_walks(g_p: KnowledgeGraph, cfg: WalkConfig = WalkConfig(), workers: int = 1) -> List[list]:
    """``walks_per_node`` biased walks from every node of ``g_p``.

    Edges are followed in both directions.  Unnormalised transition weights
    from ``cur`` (having arrived from ``prev``) are ``1/p`` back to ``prev``,
    ``1`` to common neighbours of ``prev`` and ``1/q`` otherwise.  Isolated
    nodes give length-1 walks.

    Each round visits the nodes in a seeded random order.  With ``workers >
    1`` the rounds are spread over threads, each with its own child seed, so
    the output is still reproducible but differs from the serial stream.
    """
    if len(g_p) == 0:
        raise ValueError("cannot walk an empty graph")
    walker = _Walker(undirected_adjacency(g_p), cfg.p, cfg.q)
    n = len(walker.nodes)

    def run_round(rng):
        order = rng.permutation(n)
        return [walker.walk(int(start), cfg.walk_length, rng) for start in order]

    if workers <= 1:
        rng = np.random.default_rng(cfg.seed)
        rounds = [run_round(rng) for _ in range(cfg.walks_per_node)]
    else:
        children = np.random.SeedSequence(cfg.seed).spawn(cfg.walks_per_node)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rounds = list(pool.map(lambda ss: run_round(np.random.default_rng(ss)), children))
    nodes = walker.nodes
    return [[nodes[i] for i in path] for walks in rounds for path in walks]
