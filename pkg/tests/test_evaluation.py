import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from kgrec.evaluation import (
    METRIC_KEYS,
    Interaction,
    InteractionLog,
    SplitConfig,
    average_precision,
    evaluate_scorer,
    hits_at_k,
    mean_average_precision,
    parse_tsv,
    precision_at_k,
    random_baseline,
    read_tsv,
    recall_at_k,
    split_interactions,
)
from kgrec.graph import IRI

from conftest import EX

rel_lists = st.lists(st.integers(0, 1), max_size=30)


def ref_precision(rel, k):
    return sum(rel[i] for i in range(min(k, len(rel)))) / k


def ref_recall(rel, total, k):
    return sum(rel[i] for i in range(min(k, len(rel)))) / total


def ref_ap(rel, total):
    acc, hits = 0.0, 0
    for i, r in enumerate(rel):
        if r:
            hits += 1
            acc += hits / (i + 1)
    return acc / total


class TestMetrics:
    def test_hand_cases(self):
        assert precision_at_k([1, 0, 1, 0, 0], 5) == 0.4
        assert abs(average_precision([1, 0, 1], 2) - 0.8333) <= 1e-4
        assert average_precision([1, 0, 1], 2) == pytest.approx(5 / 6, abs=1e-12)
        assert recall_at_k([1, 0, 1, 0, 0], 4, 5) == 0.5
        assert precision_at_k([1], 5) == 0.2
        assert average_precision([0, 0], 3) == 0.0

    def test_exact_against_reference_on_1000_lists(self):
        rng = np.random.default_rng(17)
        for _ in range(1000):
            rel = rng.integers(0, 2, size=int(rng.integers(0, 40))).tolist()
            total = sum(rel) + int(rng.integers(0, 3))
            if total == 0:
                total = 1
            for k in (1, 3, 5, 10, 20):
                assert precision_at_k(rel, k) == ref_precision(rel, k)
                assert recall_at_k(rel, total, k) == ref_recall(rel, total, k)
            assert average_precision(rel, total) == ref_ap(rel, total)

    def test_validation(self):
        with pytest.raises(ValueError):
            precision_at_k([1, 2], 2)
        with pytest.raises(ValueError):
            hits_at_k([1], 0)
        with pytest.raises(ValueError):
            recall_at_k([1], 0, 1)
        with pytest.raises(ValueError):
            mean_average_precision([])

    @given(rel_lists, st.integers(1, 10))
    def test_recall_monotone_in_k(self, rel, extra):
        total = max(1, sum(rel))
        rs = [recall_at_k(rel, total, k) for k in range(1, len(rel) + extra + 1)]
        assert all(a <= b for a, b in zip(rs, rs[1:]))
        assert 0.0 <= rs[-1] <= 1.0

    @given(rel_lists)
    def test_map_one_iff_prefix(self, rel):
        total = sum(rel)
        if total == 0:
            return
        prefix = rel[:total] == [1] * total
        assert (average_precision(rel, total) == 1.0) == prefix

    def test_map_mean(self):
        assert mean_average_precision([([1, 0, 1], 2), ([1], 1)]) == pytest.approx((5 / 6 + 1) / 2)


def log_of(rows):
    return InteractionLog(Interaction(IRI(EX + u), IRI(EX + i), ts) for u, i, ts in rows)


def random_log(seed, users=15, items=25):
    rng = np.random.default_rng(seed)
    rows = set()
    for u in range(users):
        for i in rng.choice(items, size=int(rng.integers(1, 8)), replace=False):
            rows.add((f"u{u}", f"i{i}", int(rng.integers(0, 100))))
    return log_of(sorted(rows))


class TestInteractions:
    def test_duplicate_rejected(self):
        with pytest.raises(ValueError):
            log_of([("a", "x", 1), ("a", "x", 2)])

    def test_tsv_roundtrip(self, tmp_path):
        log = random_log(0)
        for header in (False, True):
            assert parse_tsv(log.to_tsv(header), header) == log
            log.write_tsv(tmp_path / "i.tsv", header)
            assert read_tsv(tmp_path / "i.tsv", header) == log

    def test_tsv_angle_brackets_and_errors(self):
        log = parse_tsv(f"<{EX}u>\t<{EX}i>\n\n{EX}u\t{EX}j\t5\n")
        assert len(log) == 2 and log.users == (IRI(EX + "u"),)
        with pytest.raises(ValueError, match="line 2"):
            parse_tsv(f"{EX}u\t{EX}i\nonly-one-column\n")

    @pytest.mark.parametrize("policy", ["leave-last-k", "leave-random-k"])
    @pytest.mark.parametrize("k", [1, 2])
    def test_split_partitions(self, policy, k):
        log = random_log(3)
        train, test = split_interactions(log, SplitConfig(policy, k, seed=4))
        assert set(train) | set(test) == set(log) and not set(train) & set(test)
        for user, recs in log.by_user().items():
            held = [r for r in test if r.user == user]
            assert len(held) == (k if len(recs) > k else 0)
            if policy == "leave-last-k" and held:
                kept = [r.timestamp for r in train if r.user == user]
                assert min(r.timestamp for r in held) >= max(kept)
        assert split_interactions(log, SplitConfig(policy, k, seed=4)) == (train, test)

    def test_split_validation(self):
        with pytest.raises(ValueError):
            SplitConfig("leave-one-in")
        with pytest.raises(ValueError):
            SplitConfig(k=0)
        with pytest.raises(ValueError):
            split_interactions(InteractionLog())
        with pytest.raises(ValueError):
            split_interactions(log_of([("a", "x", None), ("a", "y", None)]), SplitConfig("leave-last-k"))


class TestEvaluate:
    def test_oracle_scorer_is_perfect(self):
        log = random_log(5)
        train, test = split_interactions(log, SplitConfig(k=1, seed=0))
        held = test.pairs()

        def oracle(user, cands):
            return np.array([1.0 if (user, c) in held else 0.0 for c in cands])

        rep = evaluate_scorer(oracle, train, test)
        assert rep["MAP"] == 1.0 and rep["R@5"] == 1.0 and rep["P@5"] == pytest.approx(0.2, abs=1e-15)
        assert tuple(rep.metrics) == METRIC_KEYS

    def test_skips_users_without_candidates(self):
        train = log_of([("a", "x", 1), ("b", "y", 1)])
        test = log_of([("a", "x2", 2), ("b", "y", 3)])
        rep = evaluate_scorer(lambda u, c: np.zeros(len(c)), train, test, catalog=[IRI(EX + n) for n in ("x", "x2", "y")])
        assert rep.users_evaluated == 1 and rep.users_skipped == 1

    def test_ties_break_by_iri(self):
        train = log_of([("a", "x", 1)])
        test = log_of([("a", "c", 2)])
        cat = [IRI(EX + n) for n in ("x", "c", "b", "d")]
        rep = evaluate_scorer(lambda u, c: np.zeros(len(c)), train, test, catalog=cat, ks=(1, 2))
        assert rep["P@1"] == 0.0 and rep["R@2"] == 1.0 and rep["MAP"] == 0.5

    def test_reports_serialise(self):
        log = random_log(6)
        train, test = split_interactions(log)
        rep = random_baseline(train, test, repeats=3, seed=1)
        doc = json.loads(rep.to_json())
        assert set(doc["metrics"]) == set(METRIC_KEYS)
        assert rep.to_text().splitlines()[0].startswith("P@5\t")
        assert random_baseline(train, test, repeats=3, seed=1).to_text() == rep.to_text()

    def test_random_baseline_near_expectation(self):
        train = log_of([(f"u{u}", "seen", 1) for u in range(40)])
        test = log_of([(f"u{u}", f"i{u % 20}", 2) for u in range(40)])
        cat = [IRI(EX + "seen")] + [IRI(f"{EX}i{k}") for k in range(20)]
        rep = random_baseline(train, test, catalog=cat, repeats=20, seed=0)
        # one relevant among 20 candidates: E[R@5] = 5/20
        assert rep["R@5"] == pytest.approx(0.25, abs=0.05)
