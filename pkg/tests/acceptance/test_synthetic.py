import numpy as np
import pytest

from contagion.cascades import split_periods, split_train_test
from contagion.graph import build_graph, filter_edges_min_count
from contagion.predictors import compare_predictors
from contagion.sim import (
    SimConfig,
    draw_ground_truth,
    generate_corpus,
    generate_periods,
    random_topology,
)
from contagion.solver import (
    SolverConfig,
    jacobian_spectral_radius,
    predicted_rates,
    solve,
)
from contagion.stats import reconstruction_report, robustness_sweep
from contagion.superspreaders import METRICS, evaluate_superspreaders
from contagion.utils.common import derive_seeds


N_NODES = 300
MEAN_DEGREE = 3.0
CASCADES_PER_SEED = 100


def _synthetic(seed, n_nodes=N_NODES, mean_degree=MEAN_DEGREE):
    topo_seed, truth_seed, corpus_seed = derive_seeds(seed, 3)
    topology = random_topology(n_nodes, mean_degree, topo_seed)
    truth = draw_ground_truth(n_nodes, truth_seed)
    cfg = SimConfig(cascades_per_seed=CASCADES_PER_SEED, rng_seed=corpus_seed)
    return topology, truth, cfg


@pytest.fixture(scope="module")
def corpus():
    topology, truth, cfg = _synthetic(12)
    return topology, truth, generate_corpus(topology, truth, cfg)


@pytest.mark.slow
def test_reconstruction(corpus):
    topology, truth, store = corpus
    g = build_graph(store)
    scores = solve(g)
    assert scores.converged
    assert scores.final_residual <= 1e-8

    report = reconstruction_report(g, scores, truth, topology=topology)
    assert report.value("I_hat~I") >= 0.90
    assert report.value("S_hat~S") >= 0.90
    # Scores are not a proxy for the diffusion degree
    assert abs(report.value("I_hat~k")) <= 0.15
    assert abs(report.value("S_hat~k")) <= 0.15
    assert jacobian_spectral_radius(g, scores, damping=0.5) < 1


@pytest.mark.slow
def test_gauge_invariance(corpus):
    _, _, store = corpus
    g = build_graph(store)
    base = solve(g, SolverConfig(I0=1.0, tolerance=1e-12))
    scaled = solve(g, SolverConfig(I0=10.0, tolerance=1e-12))
    assert np.allclose(
        predicted_rates(base, g), predicted_rates(scaled, g), rtol=1e-9
    )


@pytest.mark.slow
def test_robustness(corpus):
    topology, truth, store = corpus
    report = robustness_sweep(
        store, truth, (0.1, 0.3, 0.5), rng_seed=1, topology=topology
    )
    assert report.value("I_hat~I", fraction=0.3) >= 0.6
    assert report.value("S_hat~S", fraction=0.3) >= 0.7

    # Accuracy degrades with the fraction of removed events, up to noise
    for name in ("I_hat~I", "S_hat~S"):
        values = [report.value(name, fraction=f) for f in (0.1, 0.3, 0.5)]
        assert values[0] + 0.02 >= values[1] and values[1] + 0.02 >= values[2]


@pytest.mark.slow
def test_predictor_ordering():
    wins = 0
    for seed in range(10):
        topology, truth, cfg = _synthetic(seed, n_nodes=200)
        train, test = split_periods(generate_periods(topology, truth, 2, cfg), 2)
        g_train, g_test = build_graph(train), build_graph(test)
        report = compare_predictors(
            g_train,
            g_test,
            solve(g_train),
            pairs=filter_edges_min_count(g_train, min_reshares=3),
        )
        pearson = {
            e.tags["predictor"]: e.value
            for e in report.entries
            if e.statistic == "pearson"
        }
        assert len(pearson) == 10
        best_baseline = max(v for k, v in pearson.items() if k != "IS")
        wins += pearson["IS"] > best_baseline
    assert wins >= 9


@pytest.mark.slow
def test_superspreaders():
    wins = 0
    for seed in range(10):
        topology, truth, cfg = _synthetic(100 + seed, n_nodes=200)
        train, test = split_train_test(generate_corpus(topology, truth, cfg), 0.8)
        g_train = build_graph(train)
        report = evaluate_superspreaders(
            g_train, solve(g_train), test, fractions=(0.1,)
        )
        precision = {
            metric: report.value("precision", metric=metric, fraction=0.1)
            for metric in METRICS
        }
        wins += precision["total_probability"] >= precision["outdegree"]
        # Top two in every replicate, ties included
        better = sum(v > precision["total_probability"] for v in precision.values())
        assert better <= 1, f"seed={seed} precision={precision}"

    assert wins >= 8
