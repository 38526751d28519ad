"""Post-hoc explanations by matching user and item subgraphs."""

from .render import FORMATS, percent, render_radar, render_report, render_table, render_text
from .report import (
    ExplanationReport,
    NoOverlapError,
    PropertyMatch,
    explain,
    extract_profile,
    match_report,
    score_pair,
)
from .similarity import numeric_match, triple_similarity, word_triple_similarity
from .words import (
    WordVectorProvider,
    tokenize_term,
    tokenize_triple,
    train_word_vectors,
    triple_sentences,
)

__all__ = [
    "FORMATS", "ExplanationReport", "NoOverlapError", "PropertyMatch",
    "WordVectorProvider", "explain", "extract_profile", "match_report",
    "numeric_match", "percent", "render_radar", "render_report", "render_table",
    "render_text", "score_pair", "tokenize_term", "tokenize_triple",
    "train_word_vectors", "triple_sentences", "triple_similarity",
    "word_triple_similarity",
]
