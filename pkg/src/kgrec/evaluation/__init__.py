"""Interaction logs, splits and top-N metrics."""

from .evaluate import (
    METRIC_KEYS,
    PROTOCOL,
    MetricReport,
    UserResult,
    evaluate,
    evaluate_scorer,
    random_baseline,
    random_scorer,
)
from .interactions import (
    Interaction,
    InteractionLog,
    SplitConfig,
    parse_tsv,
    read_tsv,
    split_interactions,
)
from .metrics import (
    average_precision,
    hits_at_k,
    mean_average_precision,
    precision_at_k,
    recall_at_k,
)

__all__ = [
    "METRIC_KEYS", "PROTOCOL", "Interaction", "InteractionLog", "MetricReport",
    "SplitConfig", "UserResult", "average_precision", "evaluate", "evaluate_scorer",
    "hits_at_k", "mean_average_precision", "parse_tsv", "precision_at_k",
    "random_baseline", "random_scorer", "read_tsv", "recall_at_k", "split_interactions",
]
