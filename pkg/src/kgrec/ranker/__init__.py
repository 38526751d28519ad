"""LambdaMART ranking over per-relation similarity features."""

from .dataset import NEGATIVE_RATIO, build_training_set
from .features import FeatureVector, TrainingInstance, build_features, feature_matrix, feature_name
from .lambdamart import (
    LambdaMartConfig,
    NoSplitsWarning,
    RankingEnsemble,
    UntrainableError,
    dumps_model,
    feature_importance,
    fit_lambdamart,
    loads_model,
    mean_ndcg,
    rank_items,
    score_candidates,
    top_n,
    train_lambdamart,
    training_ndcg,
)
from .lambdas import lambda_gradients, ndcg_at, rank_positions, swap_deltas
from .tree import RegressionTree, best_split, fit_regression_tree

__all__ = [
    "FeatureVector", "LambdaMartConfig", "NEGATIVE_RATIO", "NoSplitsWarning",
    "RankingEnsemble", "RegressionTree", "TrainingInstance", "UntrainableError",
    "best_split", "build_features", "build_training_set", "dumps_model",
    "feature_importance", "feature_matrix", "feature_name", "fit_lambdamart",
    "fit_regression_tree", "lambda_gradients", "loads_model", "mean_ndcg",
    "ndcg_at", "rank_items", "rank_positions", "score_candidates", "swap_deltas",
    "top_n", "train_lambdamart", "training_ndcg",
]
