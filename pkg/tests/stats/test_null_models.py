import numpy as np
import pytest

from contagion.solver import SolverConfig, solve
from contagion.stats import (
    directed_double_edge_swap,
    null_pvalue_rewire,
    null_pvalue_weights,
    rewire,
)
from contagion.utils.common import make_generator
from tests.basic_graphs import single_edge, two_cycle


def test_null_pvalue_weights(er_graph):
    result = null_pvalue_weights(er_graph, "k_in~I", n_real=20, rng_seed=5)
    assert result.model == "weights"
    assert result.n_real == 20
    assert len(result.null_values) + result.n_dropped == 20
    assert 0 <= result.p_greater <= 1 and 0 <= result.p_less <= 1
    # Ties count on both sides
    assert result.p_greater + result.p_less >= 1

    again = null_pvalue_weights(er_graph, "k_in~I", n_real=20, rng_seed=5)
    assert again.null_values == result.null_values


def test_null_pvalue_weights_workers(er_graph):
    one = null_pvalue_weights(er_graph, "k_out~S", n_real=4, rng_seed=1, workers=1)
    two = null_pvalue_weights(er_graph, "k_out~S", n_real=4, rng_seed=1, workers=2)
    assert one.null_values == two.null_values


def test_null_pvalue_rewire(er_graph):
    result = null_pvalue_rewire(er_graph, "I~S_nn_out", n_real=20, rng_seed=2)
    assert result.model == "rewire"
    assert len(result.null_values) + result.n_dropped == 20
    assert result.p_value in (result.p_greater, result.p_less)


def test_null_pvalue_rewire_too_few_edges():
    with pytest.raises(ValueError):
        null_pvalue_rewire(single_edge(), "k_in~I", n_real=20)


def test_rewire_preserves_degrees(er_graph):
    g = rewire(er_graph, make_generator(0), swaps_per_edge=5)
    assert g.n_edges == er_graph.n_edges
    assert np.array_equal(g.k_in, er_graph.k_in)
    assert np.array_equal(g.k_out, er_graph.k_out)
    assert not (g.src == g.dst).any()
    assert len(set(zip(g.src.tolist(), g.dst.tolist()))) == g.n_edges
    assert not np.array_equal(g.dst, er_graph.dst)


def test_swap_without_valid_move():
    # Both swaps of a 2-cycle create self-loops
    g = two_cycle()
    with pytest.raises(ValueError):
        directed_double_edge_swap(g.src, g.dst, 10, make_generator(0), max_tries=100)


def test_null_pvalue_weights_drops_unconverged(er_graph):
    scores = solve(er_graph)
    # One iteration never reaches the tolerance
    with pytest.raises(ValueError, match="every null realization"):
        null_pvalue_weights(
            er_graph,
            "k_in~I",
            n_real=4,
            scores=scores,
            solver_cfg=SolverConfig(max_iter=1),
        )
