"""End-to-end orchestration: config, seeds, artifact layout and stages.

Artifacts under the output directory::

    graph.nt                 normalised input graph (asserted triples)
    train.tsv, test.tsv      interaction split
    embeddings/<rel>.emb     one space per relation type
    words.emb                word vectors for explanations
    model.txt                LambdaMART ensemble
    metrics.txt, metrics.json
"""

from __future__ import annotations

import dataclasses
import json
import logging
import os
import zlib
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from . import schema
from .embeddings import EmbeddingSpace, TrainConfig, WalkConfig, embed_relation, sanitize_relation
from .evaluation import (
    InteractionLog,
    MetricReport,
    SplitConfig,
    evaluate,
    random_baseline,
    read_tsv,
    split_interactions,
)
from .explainer import WordVectorProvider, explain, render_report, train_word_vectors
from .graph import IRI, KnowledgeGraph, Term, infer_closure, read_ntriples, subgraph_by_relation, term_key, write_ntriples
from .ranker import LambdaMartConfig, RankingEnsemble, build_training_set, top_n, train_lambdamart
from .schema import Feature

logger = logging.getLogger(__name__)


class ArtifactMissing(RuntimeError):
    """A stage needs a file an earlier stage has not produced."""


class ConfigError(ValueError):
    pass


def derive_seed(seed: int, purpose: str) -> int:
    """Independent 32-bit seed for one consumer of the global seed."""
    return int(np.random.SeedSequence([int(seed), zlib.crc32(purpose.encode("utf-8"))]).generate_state(1)[0])


@dataclass
class PipelineConfig:
    kg: str = ""
    interactions: str = ""
    output: str = "out"
    header: bool = False
    seed: int = 0
    relations: Tuple[str, ...] = tuple(t.value for t in schema.RELATION_TYPES)
    features: Tuple[Feature, ...] = schema.FEATURES
    item_class: str = schema.VEHICLE.value
    walks_per_node: int = 10
    walk_length: int = 40
    p: float = 1.0
    q: float = 1.0
    dimension: int = 32
    window: int = 5
    negatives: int = 5
    learning_rate: float = 0.025
    min_learning_rate: float = 0.0001
    epochs: int = 3
    num_trees: int = 100
    max_leaves: int = 10
    shrinkage: float = 0.1
    min_instances_per_leaf: int = 1
    truncation: int = 10
    negative_ratio: int = 4
    split_policy: str = "leave-random-k"
    split_k: int = 1
    ks: Tuple[int, ...] = (5, 10)
    random_repeats: int = 20
    word_dimension: int = 16
    word_epochs: int = 5

    def __post_init__(self):
        if not self.relations:
            raise ConfigError("relation-type list is empty")
        if not self.features:
            raise ConfigError("feature pairing is empty")
        paths = [os.path.abspath(p) for p in (self.kg, self.interactions) if p]
        if len(set(paths)) != len(paths):
            raise ConfigError("kg and interactions paths must differ")
        out = os.path.abspath(self.output)
        if out in paths:
            raise ConfigError("output directory collides with an input path")

    def path(self, *parts: str) -> str:
        return os.path.join(self.output, *parts)

    def walk_config(self, relation: str) -> WalkConfig:
        return WalkConfig(self.walks_per_node, self.walk_length, self.p, self.q, derive_seed(self.seed, "walks:" + relation))

    def train_config(self, relation: str) -> TrainConfig:
        return TrainConfig(
            self.dimension, self.window, self.negatives, self.learning_rate,
            self.min_learning_rate, self.epochs, derive_seed(self.seed, "skipgram:" + relation),
        )

    def ranker_config(self) -> LambdaMartConfig:
        return LambdaMartConfig(
            num_trees=self.num_trees, max_leaves=self.max_leaves, shrinkage=self.shrinkage,
            min_instances_per_leaf=self.min_instances_per_leaf, truncation=self.truncation,
            seed=derive_seed(self.seed, "ranker"),
        )

    def split_config(self) -> SplitConfig:
        return SplitConfig(self.split_policy, self.split_k, derive_seed(self.seed, "split"))


_BOOL = {"1": True, "true": True, "yes": True, "0": False, "false": False, "no": False}


def _parse_feature(text: str) -> Feature:
    parts = [p.strip() for p in text.split("|")]
    if len(parts) not in (3, 4):
        raise ConfigError(f"feature needs 'name | user-predicate | item-predicate [| numeric]': {text!r}")
    numeric = len(parts) == 4 and _BOOL.get(parts[3].lower(), None)
    if len(parts) == 4 and numeric is None:
        raise ConfigError(f"bad numeric flag in {text!r}")
    return Feature(parts[0], IRI(parts[1].strip("<>")), IRI(parts[2].strip("<>")), bool(numeric))


def _coerce(name: str, raw: str):
    fields = {f.name: f for f in dataclasses.fields(PipelineConfig)}
    if name not in fields:
        raise ConfigError(f"unknown config key {name!r}")
    default = getattr(PipelineConfig, name, None)
    if name == "features":
        return tuple(_parse_feature(x) for x in raw.split(";") if x.strip())
    if name == "relations":
        return tuple(x.strip().strip("<>") for x in raw.split(",") if x.strip())
    if name == "ks":
        return tuple(int(x) for x in raw.split(",") if x.strip())
    try:
        if isinstance(default, bool):
            if raw.lower() not in _BOOL:
                raise ValueError(raw)
            return _BOOL[raw.lower()]
        if isinstance(default, int):
            return int(raw)
        if isinstance(default, float):
            return float(raw)
    except ValueError:
        raise ConfigError(f"bad value for {name}: {raw!r}") from None
    return raw


def parse_config(text: str) -> Dict[str, object]:
    """``key = value`` lines; ``#`` starts a comment; repeated keys: last wins."""
    out: Dict[str, object] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"config line {lineno}: expected key = value")
        key, raw = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_").replace(".", "_")] = _coerce(key.replace("-", "_").replace(".", "_"), raw)
    return out


def load_config(path: Optional[str] = None, overrides: Optional[Mapping[str, object]] = None) -> PipelineConfig:
    values: Dict[str, object] = {}
    if path:
        if not os.path.exists(path):
            raise FileNotFoundError(path)
        with open(path, encoding="utf-8") as fh:
            values.update(parse_config(fh.read()))
    for k, v in (overrides or {}).items():
        if v is not None:
            values[k] = _coerce(k, v) if isinstance(v, str) else v
    return PipelineConfig(**values)


def dump_config(cfg: PipelineConfig) -> str:
    lines = []
    for f in dataclasses.fields(cfg):
        v = getattr(cfg, f.name)
        if f.name == "features":
            v = "; ".join(f"{x.name} | {x.user_predicate.value} | {x.item_predicate.value} | {str(x.numeric).lower()}" for x in v)
        elif f.name in ("relations", "ks"):
            v = ",".join(str(x) for x in v)
        elif isinstance(v, bool):
            v = str(v).lower()
        lines.append(f"{f.name} = {v}")
    return "\n".join(lines) + "\n"


def _require(path: str, what: str) -> str:
    if not os.path.exists(path):
        raise ArtifactMissing(f"{what} not found: {path}")
    return path


def load_graph(cfg: PipelineConfig) -> KnowledgeGraph:
    return read_ntriples(_require(cfg.path("graph.nt"), "graph"))


def load_split(cfg: PipelineConfig) -> Tuple[InteractionLog, InteractionLog]:
    return (read_tsv(_require(cfg.path("train.tsv"), "train interactions"), header=True),
            read_tsv(_require(cfg.path("test.tsv"), "test interactions"), header=True))


def load_spaces(cfg: PipelineConfig) -> List[EmbeddingSpace]:
    return [
        EmbeddingSpace.load(_require(cfg.path("embeddings", sanitize_relation(r) + ".emb"), "embeddings"), relation=r)
        for r in cfg.relations
    ]


def load_model(cfg: PipelineConfig) -> RankingEnsemble:
    return RankingEnsemble.load(_require(cfg.path("model.txt"), "model"))


def item_catalog(g: KnowledgeGraph, cfg: PipelineConfig, logs: Sequence[InteractionLog] = ()) -> Tuple[Term, ...]:
    """Instances of the configured item class; items seen in interactions if there are none."""
    items = set(infer_closure(g).subjects(schema.TYPE, IRI(cfg.item_class)))
    if not items:
        for log in logs:
            items.update(log.items)
    return tuple(sorted(items, key=term_key))


def ingest(cfg: PipelineConfig) -> Dict[str, int]:
    """Validate and normalise the inputs, and write the graph and the split."""
    if not cfg.kg:
        raise ConfigError("no knowledge graph path configured")
    g = read_ntriples(_require(cfg.kg, "knowledge graph"))
    os.makedirs(cfg.output, exist_ok=True)
    write_ntriples(g, cfg.path("graph.nt"))
    stats = {"triples": len(g), "relations": len(g.relation_types)}
    if cfg.interactions:
        log = read_tsv(_require(cfg.interactions, "interactions"), header=cfg.header)
        train, test = split_interactions(log, cfg.split_config())
        train.write_tsv(cfg.path("train.tsv"), header=True)
        test.write_tsv(cfg.path("test.tsv"), header=True)
        stats.update(interactions=len(log), train=len(train), test=len(test))
    logger.info("ingest: %s", stats)
    return stats


def train_embeddings(cfg: PipelineConfig) -> List[EmbeddingSpace]:
    g = load_graph(cfg)
    os.makedirs(cfg.path("embeddings"), exist_ok=True)
    spaces = []
    for rel in cfg.relations:
        g_p = subgraph_by_relation(g, IRI(rel))
        if len(g_p) == 0:
            raise ValueError(f"embeddings: relation {rel} has no triples")
        sp = embed_relation(g_p, cfg.walk_config(rel), cfg.train_config(rel), relation=rel)
        sp.save(cfg.path("embeddings", sanitize_relation(rel) + ".emb"))
        logger.info("embedded %s: %d entities", rel, len(sp))
        spaces.append(sp)
    words = train_word_vectors(
        g.triples, TrainConfig(dimension=cfg.word_dimension, window=5, epochs=cfg.word_epochs, seed=derive_seed(cfg.seed, "words"))
    )
    _save_words(words, cfg.path("words.emb"))
    return spaces


def _save_words(wv: WordVectorProvider, path: str) -> None:
    EmbeddingSpace("words", list(wv.words), wv.matrix if len(wv) else np.zeros((0, 2))).save(path)


def load_words(cfg: PipelineConfig) -> WordVectorProvider:
    path = cfg.path("words.emb")
    if os.path.exists(path):
        return WordVectorProvider.from_space(EmbeddingSpace.load(path, relation="words"))
    logger.warning("no word vectors at %s; unknown words match only themselves", path)
    return WordVectorProvider({})


def train_ranker(cfg: PipelineConfig) -> RankingEnsemble:
    g = load_graph(cfg)
    train, test = load_split(cfg)
    spaces = load_spaces(cfg)
    catalog = item_catalog(g, cfg, (train, test))
    instances = build_training_set(
        train.items_of(), catalog, spaces, cfg.negative_ratio, seed=derive_seed(cfg.seed, "negatives")
    )
    model = train_lambdamart(instances, cfg.ranker_config())
    model.save(cfg.path("model.txt"))
    logger.info("ranker: %d trees, training NDCG %.4f", len(model.trees), model.history[-1] if model.history else float("nan"))
    return model


def run_evaluation(cfg: PipelineConfig) -> Tuple[MetricReport, MetricReport]:
    g = load_graph(cfg)
    model = load_model(cfg)
    spaces = load_spaces(cfg)
    train, test = load_split(cfg)
    catalog = item_catalog(g, cfg, (train, test))
    report = evaluate(model, spaces, train, test, cfg.ks, catalog)
    baseline = random_baseline(train, test, catalog, cfg.ks, cfg.random_repeats, derive_seed(cfg.seed, "random"))
    text = report.to_text() + "".join(f"random_{k}\t{v:.6f}\n" for k, v in baseline.metrics.items())
    with open(cfg.path("metrics.txt"), "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    doc = json.loads(report.to_json())
    doc["random_baseline"] = {k: round(v, 12) for k, v in baseline.metrics.items()}
    with open(cfg.path("metrics.json"), "w", encoding="utf-8", newline="\n") as fh:
        fh.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return report, baseline


def recommend(cfg: PipelineConfig, user: Term, n: int = 10) -> List[Tuple[Term, float]]:
    model = load_model(cfg)
    spaces = load_spaces(cfg)
    g = load_graph(cfg)
    seen: set = set()
    if os.path.exists(cfg.path("train.tsv")):
        train, test = load_split(cfg)
        seen = train.items_of().get(user, set())
        catalog = item_catalog(g, cfg, (train, test))
    else:
        catalog = item_catalog(g, cfg)
    return top_n(model, user, catalog, n, exclusions=seen, spaces=spaces)


def explain_pair(cfg: PipelineConfig, user: Term, item: Term, fmt: str = "text") -> str:
    g = load_graph(cfg)
    report = explain(g, user, item, load_words(cfg), cfg.features)
    return render_report(report, fmt)


def run_all(cfg: PipelineConfig) -> Tuple[MetricReport, MetricReport]:
    ingest(cfg)
    train_embeddings(cfg)
    train_ranker(cfg)
    return run_evaluation(cfg)
