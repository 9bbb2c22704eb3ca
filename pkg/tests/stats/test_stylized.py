import numpy as np
import pytest

from contagion.cascades import split_periods
from contagion.graph import build_graph
from contagion.sim import (
    SimConfig,
    draw_ground_truth,
    generate_corpus,
    generate_periods,
    random_topology,
)
from contagion.solver import ScoreVector, solve
from contagion.stats import (
    ASSORTATIVITY_STATISTICS,
    NODE_STATISTICS,
    period_table,
    reconstruction_report,
    robustness_sweep,
    stylized_facts,
)
from tests.basic_graphs import random_weighted_graph, two_cycle


def _corpus(n=60, cascades_per_seed=20):
    topology = random_topology(n, 2.0, rng_seed=1)
    truth = draw_ground_truth(n, rng_seed=2)
    store = generate_corpus(
        topology, truth, SimConfig(cascades_per_seed=cascades_per_seed, rng_seed=3)
    )
    return topology, truth, store


def test_stylized_facts(er_graph):
    report = stylized_facts(solve(er_graph), er_graph, quantile=0.2)
    assert 0 <= report.value("joint_top_fraction") <= 1
    assert -1 <= report.value("I~S") <= 1
    assert report.value("n_high_influence") >= 0
    assert report.metadata == {"quantile": 0.2}


def _scores(I, S):
    return ScoreVector(np.asarray(I, dtype=float), np.asarray(S, dtype=float))


def test_stylized_facts_anti_correlated():
    g = random_weighted_graph(400, 0.01, seed=4)
    rng = np.random.default_rng(0)
    x = rng.standard_normal(400)
    y = -0.5 * x + np.sqrt(1 - 0.5**2) * rng.standard_normal(400)
    report = stylized_facts(_scores(np.exp(x), np.exp(y)), g, quantile=0.2)
    assert report.value("I~S") < 0
    # Independent scores would give 0.2 ** 2
    assert report.value("joint_top_fraction") <= 0.04


def test_stylized_facts_identical_scores(er_graph):
    values = np.random.default_rng(1).random(er_graph.n_nodes) + 0.1
    report = stylized_facts(_scores(values, values), er_graph)
    assert report.value("n_high_influence") == report.value("n_high_susceptibility")


def test_stylized_facts_uniform_influence(er_graph):
    S = np.random.default_rng(2).random(er_graph.n_nodes) + 0.1
    report = stylized_facts(_scores(np.full(er_graph.n_nodes, 0.5), S), er_graph)
    assert report.value("neighbor_influence_ratio") == pytest.approx(1.0)


def test_stylized_facts_too_small():
    g = two_cycle()
    with pytest.raises(ValueError):
        stylized_facts(solve(g), g)


def test_reconstruction_report():
    topology, truth, store = _corpus()
    g = build_graph(store)
    report = reconstruction_report(g, solve(g), truth, topology=topology)
    names = {e.statistic for e in report.entries}
    assert names == {"I_hat~I", "I_hat~f", "I_hat~k", "S_hat~S", "S_hat~g", "S_hat~k"}
    assert report.value("I_hat~I") > 0
    assert report.value("S_hat~S") > 0


def test_robustness_sweep():
    topology, truth, store = _corpus()
    report = robustness_sweep(store, truth, fractions=(0.1, 0.5), topology=topology)
    assert {e.tags["fraction"] for e in report.entries} == {0.1, 0.5}
    assert len(report.get("I_hat~I", fraction=0.5).tags) == 1


def test_period_table():
    topology = random_topology(40, 2.0, rng_seed=1)
    truth = draw_ground_truth(40, rng_seed=2)
    cfg = SimConfig(cascades_per_seed=10, rng_seed=3)
    periods = split_periods(generate_periods(topology, truth, 2, cfg), 2)

    report = period_table(periods)
    assert {e.tags["period"] for e in report.entries} == {0, 1}
    assert {e.statistic for e in report.entries} <= set(
        NODE_STATISTICS + ASSORTATIVITY_STATISTICS
    )
    assert all(e.p_value is None for e in report.entries)

    report = period_table(periods, statistics=["k_in~I", "I~S_nn_out"], n_real=3)
    assert all(e.p_value is not None for e in report.entries)
    assert all("significant" in e.tags for e in report.entries)
