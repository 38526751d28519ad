"""Command-line front end: ``kgrec <subcommand> [options]``.

Exit status is 0 on success, 1 on runtime errors and 2 on usage errors.
The log level comes from ``KGREC_LOG_LEVEL`` (default WARNING).
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import traceback
from typing import List, Optional

from . import pipeline
from .graph import IRI, write_ntriples

LOG_ENV = "KGREC_LOG_LEVEL"

# flag dest -> config field, per subcommand
_OVERRIDES = {
    "ingest": ("kg", "interactions", "header", "split_policy", "split_k"),
    "train-embeddings": ("relations", "walks_per_node", "walk_length", "p", "q", "dimension", "window", "negatives", "epochs"),
    "train-ranker": ("num_trees", "max_leaves", "shrinkage", "min_instances_per_leaf", "truncation", "negative_ratio"),
    "recommend": (),
    "explain": ("features",),
    "evaluate": ("ks", "random_repeats"),
}


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--config", help="key = value config file; flags override it")
    p.add_argument("--output", help="artifact directory (default: out)")
    p.add_argument("--seed", type=int, help="global seed")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="kgrec", description="Knowledge-graph recommender with post-hoc explanations.")
    sub = parser.add_subparsers(dest="command", metavar="command")
    sub.required = True

    p = sub.add_parser("ingest", parents=[common], help="validate inputs, write graph and split")
    p.add_argument("--kg", help="N-Triples knowledge graph")
    p.add_argument("--interactions", help="TSV user<TAB>item[<TAB>timestamp]")
    p.add_argument("--header", action="store_const", const=True, help="interactions file has a header row")
    p.add_argument("--split-policy", choices=("leave-last-k", "leave-random-k"))
    p.add_argument("--split-k", type=int)

    p = sub.add_parser("train-embeddings", parents=[common], help="one embedding space per relation type")
    p.add_argument("--relations", help="comma-separated predicate IRIs")
    p.add_argument("--walks-per-node", type=int)
    p.add_argument("--walk-length", type=int)
    p.add_argument("--p", type=float)
    p.add_argument("--q", type=float)
    p.add_argument("--dimension", type=int)
    p.add_argument("--window", type=int)
    p.add_argument("--negatives", type=int)
    p.add_argument("--epochs", type=int)

    p = sub.add_parser("train-ranker", parents=[common], help="fit the LambdaMART ensemble")
    p.add_argument("--num-trees", type=int)
    p.add_argument("--max-leaves", type=int)
    p.add_argument("--shrinkage", type=float)
    p.add_argument("--min-instances-per-leaf", type=int)
    p.add_argument("--truncation", type=int)
    p.add_argument("--negative-ratio", type=int)

    p = sub.add_parser("recommend", parents=[common], help="print the top-n items for a user")
    p.add_argument("--user", required=True, help="user IRI")
    p.add_argument("-n", type=int, default=10, help="number of items (default 10)")

    p = sub.add_parser("explain", parents=[common], help="explain one user-item pair")
    p.add_argument("--user", required=True)
    p.add_argument("--item", required=True)
    p.add_argument("--format", choices=("table", "radar", "text"), default="text")
    p.add_argument("--features", help="'name | user-pred | item-pred [| numeric]' entries separated by ';'")
    p.add_argument("--out", help="write the render here instead of stdout")

    p = sub.add_parser("evaluate", parents=[common], help="metrics against the held-out split")
    p.add_argument("--ks", help="comma-separated cutoffs (default 5,10)")
    p.add_argument("--random-repeats", type=int)

    p = sub.add_parser("gen-synthetic", parents=[common], help="write a synthetic graph and interaction log")
    p.add_argument("--users", type=int, default=50)
    p.add_argument("--items", type=int, default=200)
    p.add_argument("--noise", type=float, default=0.1)
    p.add_argument("--interactions-target", type=int, help="interaction count the threshold is tuned to")
    p.add_argument("--kg-out", required=True)
    p.add_argument("--interactions-out", help="required unless --fixture")
    p.add_argument("--fixture", action="store_true", help="write the single-pair explanation fixture instead")
    return parser


def _config(args) -> pipeline.PipelineConfig:
    overrides = {"output": args.output, "seed": args.seed}
    for name in _OVERRIDES.get(args.command, ()):
        overrides[name] = getattr(args, name, None)
    return pipeline.load_config(args.config, overrides)


def _iri(text: str):
    return IRI(text.strip().strip("<>"))


def _gen_synthetic(args) -> int:
    from .synthetic import SyntheticSpec, explanation_fixture, generate

    if args.fixture:
        write_ntriples(explanation_fixture(), args.kg_out)
        return 0
    if not args.interactions_out:
        raise _Usage("gen-synthetic needs --interactions-out (or --fixture)")
    seed = pipeline.derive_seed(args.seed or 0, "synthetic")
    kg, log = generate(SyntheticSpec(args.users, args.items, args.noise, seed, args.interactions_target))
    write_ntriples(kg, args.kg_out)
    log.write_tsv(args.interactions_out)
    print(f"{len(kg)} triples, {len(log)} interactions")
    return 0


class _Usage(Exception):
    pass


def run(args) -> int:
    if args.command == "gen-synthetic":
        return _gen_synthetic(args)
    cfg = _config(args)
    if args.command == "ingest":
        stats = pipeline.ingest(cfg)
        print(" ".join(f"{k}={v}" for k, v in stats.items()))
    elif args.command == "train-embeddings":
        spaces = pipeline.train_embeddings(cfg)
        for sp in spaces:
            print(f"{sp.relation}\t{len(sp)} entities")
    elif args.command == "train-ranker":
        model = pipeline.train_ranker(cfg)
        print(f"{len(model.trees)} trees")
    elif args.command == "recommend":
        if args.n < 1:
            raise _Usage("-n must be positive")
        for item, score in pipeline.recommend(cfg, _iri(args.user), args.n):
            print(f"{item.value}\t{score:.6f}")
    elif args.command == "explain":
        out = pipeline.explain_pair(cfg, _iri(args.user), _iri(args.item), args.format)
        if args.out:
            with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(out)
        else:
            sys.stdout.write(out)
    elif args.command == "evaluate":
        report, _ = pipeline.run_evaluation(cfg)
        sys.stdout.write(report.to_text())
    return 0


def _origin(exc: BaseException) -> str:
    """Dotted module of the innermost package frame that raised ``exc``."""
    name = "kgrec"
    for frame, _ in traceback.walk_tb(exc.__traceback__):
        mod = frame.f_globals.get("__name__", "")
        if mod.startswith("kgrec"):
            name = mod
    return name


def main(argv: Optional[List[str]] = None) -> int:
    level = logging.getLevelName(os.environ.get(LOG_ENV, "WARNING").upper())
    logging.basicConfig(level=level if isinstance(level, int) else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return run(args)
    except _Usage as exc:
        parser.print_usage(sys.stderr)
        print(f"kgrec: error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"kgrec: error: file not found: {exc.filename or exc}", file=sys.stderr)
        return 1
    except pipeline.ArtifactMissing as exc:
        print(f"kgrec: error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001 - report and exit 1
        print(f"kgrec: error: {_origin(exc)}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
