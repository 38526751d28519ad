"""Implicit-feedback interaction logs, their TSV form, and train/test splits."""

from __future__ import annotations

import io
from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Set, Tuple

import numpy as np

from ..graph import IRI, Term, term_key


@dataclass(frozen=True)
class Interaction:
    user: Term
    item: Term
    timestamp: Optional[int] = None


class InteractionLog:
    """Observed ``(user, item)`` pairs; each pair appears at most once."""

    def __init__(self, records: Iterable[Interaction] = ()):
        records = list(records)
        seen = set()
        for r in records:
            if not (isinstance(r.user, Term) and isinstance(r.item, Term)):
                raise TypeError("users and items must be Terms")
            key = (r.user, r.item)
            if key in seen:
                raise ValueError(f"duplicate interaction {r.user} {r.item}")
            seen.add(key)
        self.records: Tuple[Interaction, ...] = tuple(
            sorted(records, key=lambda r: (term_key(r.user), term_key(r.item)))
        )

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def __eq__(self, other) -> bool:
        return isinstance(other, InteractionLog) and self.records == other.records

    def __contains__(self, pair) -> bool:
        return tuple(pair) in self.pairs()

    def pairs(self) -> Set[Tuple[Term, Term]]:
        return {(r.user, r.item) for r in self.records}

    @property
    def users(self) -> Tuple[Term, ...]:
        return tuple(sorted({r.user for r in self.records}, key=term_key))

    @property
    def items(self) -> Tuple[Term, ...]:
        return tuple(sorted({r.item for r in self.records}, key=term_key))

    def by_user(self) -> Dict[Term, List[Interaction]]:
        out: Dict[Term, List[Interaction]] = defaultdict(list)
        for r in self.records:
            out[r.user].append(r)
        return dict(out)

    def items_of(self) -> Dict[Term, Set[Term]]:
        return {u: {r.item for r in rs} for u, rs in self.by_user().items()}

    def to_tsv(self, header: bool = False) -> str:
        buf = io.StringIO()
        if header:
            buf.write("user\titem\ttimestamp\n")
        for r in self.records:
            ts = "" if r.timestamp is None else str(r.timestamp)
            buf.write(f"{r.user.value}\t{r.item.value}\t{ts}\n".replace("\t\n", "\n"))
        return buf.getvalue()

    def write_tsv(self, path, header: bool = False) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.to_tsv(header))


def _iri(text: str) -> Term:
    text = text.strip()
    if text.startswith("<") and text.endswith(">"):
        text = text[1:-1]
    return IRI(text)


def parse_tsv(text: str, header: bool = False) -> InteractionLog:
    """Read ``user<TAB>item[<TAB>timestamp]`` lines; blank lines are skipped."""
    records = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if header and lineno == 1:
            continue
        if not line.strip():
            continue
        cols = line.rstrip("\r").split("\t")
        if len(cols) not in (2, 3):
            raise ValueError(f"line {lineno}: expected 2 or 3 tab-separated columns")
        try:
            ts = int(cols[2]) if len(cols) == 3 and cols[2].strip() else None
            records.append(Interaction(_iri(cols[0]), _iri(cols[1]), ts))
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    try:
        return InteractionLog(records)
    except ValueError as exc:
        raise ValueError(f"interactions: {exc}") from None


def read_tsv(path, header: bool = False) -> InteractionLog:
    with open(path, encoding="utf-8") as fh:
        return parse_tsv(fh.read(), header)


@dataclass(frozen=True)
class SplitConfig:
    policy: str = "leave-random-k"
    k: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.policy not in ("leave-last-k", "leave-random-k"):
            raise ValueError(f"unknown split policy {self.policy!r}")
        if self.k < 1:
            raise ValueError("k must be >= 1")


def split_interactions(log: InteractionLog, cfg: SplitConfig = SplitConfig()) -> Tuple[InteractionLog, InteractionLog]:
    """Hold out ``k`` interactions of every user who has more than ``k``.

    ``leave-last-k`` holds out the latest by timestamp (ties by item IRI);
    ``leave-random-k`` draws them from one seeded stream, users in lexical
    order.  Users with ``k`` or fewer interactions stay wholly in train.
    """
    if len(log) == 0:
        raise ValueError("empty interaction log")
    rng = np.random.default_rng(cfg.seed)
    train, test = [], []
    for user, recs in sorted(log.by_user().items(), key=lambda kv: term_key(kv[0])):
        if len(recs) <= cfg.k:
            train.extend(recs)
            continue
        if cfg.policy == "leave-last-k":
            if any(r.timestamp is None for r in recs):
                raise ValueError(f"leave-last-k needs timestamps (user {user})")
            ordered = sorted(recs, key=lambda r: (r.timestamp, term_key(r.item)))
            held = set(range(len(ordered) - cfg.k, len(ordered)))
        else:
            ordered = recs
            held = set(rng.choice(len(ordered), size=cfg.k, replace=False).tolist())
        for i, r in enumerate(ordered):
            (test if i in held else train).append(r)
    return InteractionLog(train), InteractionLog(test)
