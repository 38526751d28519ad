"""Knowledge-graph embedding recommender with semantic post-hoc explanations."""

__version__ = "0.1.0"
