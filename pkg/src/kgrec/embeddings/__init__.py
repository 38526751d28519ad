"""Per-relation entity embeddings from node2vec walks and skip-gram."""

from .skipgram import (
    NegativeSampler,
    TrainConfig,
    TrainingDiverged,
    initial_vectors,
    sgns_gradients,
    sgns_objective,
    train_skipgram,
)
from .space import (
    EmbeddingSpace,
    ZeroVectorWarning,
    cosine_similarity,
    dumps_space,
    loads_space,
    nearest_neighbors,
    sanitize_relation,
)
from .walks import WalkConfig, generate_walks, undirected_adjacency


def embed_relation(g_p, walk_cfg: WalkConfig, train_cfg: TrainConfig, relation: str = "") -> EmbeddingSpace:
    """Walk one relation-type graph and train its embedding space."""
    walks = generate_walks(g_p, walk_cfg)
    return train_skipgram(walks, train_cfg, relation=relation)


__all__ = [
    "EmbeddingSpace", "NegativeSampler", "TrainConfig", "TrainingDiverged",
    "WalkConfig", "ZeroVectorWarning", "cosine_similarity", "dumps_space",
    "embed_relation", "generate_walks", "initial_vectors", "loads_space",
    "nearest_neighbors", "sanitize_relation", "sgns_gradients", "sgns_objective",
    "train_skipgram", "undirected_adjacency",
]
