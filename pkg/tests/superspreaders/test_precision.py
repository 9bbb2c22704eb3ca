import logging
import numpy as np
import pandas as pd
import pytest

from contextlib import nullcontext

from contagion.graph import build_graph
from contagion.sim import SimConfig, draw_ground_truth, generate_corpus, random_topology
from contagion.cascades import split_train_test
from contagion.solver import solve
from contagion.superspreaders import (
    METRICS,
    SeedRanking,
    evaluate_superspreaders,
    precision_at,
    rank_correlation,
    realized_sizes,
    seed_table,
)
from tests.basic_graphs import store_from_rows


def test_realized_sizes(store):
    sizes = realized_sizes(store)
    # u1 seeds c1 (3 participants) and c2 (2), u3 seeds c3 alone
    assert sizes.to_dict() == {0: 2.5, 2: 1.0}
    assert sizes.name == "realized_size"


def test_realized_sizes_distinct_and_median():
    rows = [
        ("c1", "a", None, 0),
        ("c1", "b", "a", 1),
        ("c1", "b", "a", 2),
        ("c2", "a", None, 10),
        ("c3", "a", None, 20),
        ("c3", "b", "a", 21),
        ("c3", "c", "b", 22),
        ("c3", "d", "b", 23),
        ("c4", "x", "a", 30),
    ]
    store = store_from_rows(rows)
    assert realized_sizes(store).loc[0] == pytest.approx((2 + 1 + 4) / 3)
    assert realized_sizes(store, aggregate="median").loc[0] == 2.0
    # c4 has no root and no seed
    assert list(realized_sizes(store).index) == [0]


@pytest.mark.parametrize(
    ["metric", "size", "fraction", "expected", "fails"],
    [
        (np.arange(20.0), np.arange(20.0), 0.1, 1.0, False),
        (np.arange(20.0), -np.arange(20.0), 0.1, 0.0, False),
        (np.arange(20.0), np.r_[np.arange(19.0), -1.0], 0.1, 0.5, False),
        (np.exp(np.arange(20.0)), np.arange(20.0), 0.1, 1.0, False),
        (np.arange(20.0), np.arange(20.0), 0.05, 1.0, False),
        (np.arange(20.0), np.arange(20.0), 1.0, 1.0, False),
        (np.arange(20.0), np.arange(20.0), 0.0, None, True),
        (np.arange(20.0), np.arange(20.0), 1.5, None, True),
    ],
)
def test_precision_at(metric, size, fraction, expected, fails):
    ranking = SeedRanking("m", metric)
    sizes = pd.Series(size, index=np.arange(20))
    with pytest.raises(Exception) if fails else nullcontext():
        assert precision_at(ranking, sizes, fraction) == pytest.approx(expected)


def test_precision_at_domain():
    ranking = SeedRanking("m", [5.0, 4.0, 3.0, 2.0])
    sizes = pd.Series([1.0, 9.0], index=[1, 3])
    # Domain {1, 3}: node 1 tops the metric, node 3 the size
    assert precision_at(ranking, sizes, 0.5) == 0.0
    with pytest.raises(ValueError):
        precision_at(ranking, pd.Series([1.0], index=[7]), 0.5)


def test_rank_correlation():
    ranking = SeedRanking("m", [1.0, 2.0, 3.0, 4.0])
    sizes = pd.Series([1.0, 4.0, 9.0, 16.0], index=[0, 1, 2, 3])
    value, n, degenerate = rank_correlation(ranking, sizes)
    assert value == pytest.approx(1.0)
    assert n == 4
    assert not degenerate


def _corpus():
    topology = random_topology(60, 2.0, rng_seed=1)
    truth = draw_ground_truth(60, rng_seed=2)
    store = generate_corpus(topology, truth, SimConfig(cascades_per_seed=20, rng_seed=3))
    return split_train_test(store, 0.8)


def test_evaluate_superspreaders():
    train, test = _corpus()
    g_train = build_graph(train)
    scores = solve(g_train)
    report = evaluate_superspreaders(g_train, scores, test, fractions=(0.1, 0.05))
    precision = [e for e in report.entries if e.statistic == "precision"]
    assert len(precision) == 2 * len(METRICS)
    assert all(0 <= e.value <= 1 for e in precision)
    assert {e.tags["metric"] for e in precision} == set(METRICS)
    assert report.metadata["n_seeds"] == 60
    assert report.get("precision", metric="outdegree", fraction=0.1).n == 60


def test_seed_table():
    train, test = _corpus()
    g_train = build_graph(train)
    table = seed_table(g_train, solve(g_train), test)
    assert list(table.columns) == ["node_id"] + list(METRICS) + ["realized_size"]
    assert len(table) == 60
    assert (table["realized_size"] >= 1).all()


@pytest.mark.parametrize(
    "transform",
    [np.exp, lambda x: 3 * x + 1, lambda x: x**3, np.arctan],
)
@pytest.mark.parametrize("fraction", [0.1, 0.2, 0.5])
def test_precision_at_monotone_invariance(transform, fraction):
    rng = np.random.default_rng(4)
    # Ties stay ties under a strictly monotone map
    metric = rng.integers(0, 10, size=50) / 10
    sizes = pd.Series(rng.random(50) * 20, index=np.arange(50))
    base = precision_at(SeedRanking("m", metric), sizes, fraction)
    mapped = precision_at(SeedRanking("m", transform(metric)), sizes, fraction)
    assert mapped == base


def test_evaluate_superspreaders_too_few_seeds(store, caplog):
    g_train = build_graph(store)
    with caplog.at_level(logging.INFO, logger="contagion.superspreaders.precision"):
        report = evaluate_superspreaders(
            g_train, solve(g_train), store, fractions=(0.5,)
        )
    assert {e.statistic for e in report.entries} == {"precision"}
    assert any("spearman undefined" in r.getMessage() for r in caplog.records)
