import numpy as np
import pytest

from contextlib import nullcontext

from contagion.solver import ScoreVector
from contagion.stats import (
    Statistic,
    correlation,
    evaluate_statistic,
    neighbor_average,
    node_property,
)
from tests.basic_graphs import graph_from_edges


@pytest.mark.parametrize(
    ["x", "y", "method", "nonzero_only", "expected", "n", "fails"],
    [
        ([1, 2, 3, 0], [2, 4, 6, 5], "pearson", True, 1.0, 3, False),
        ([1, 2, 3], [3, 2, 1], "pearson", False, -1.0, 3, False),
        ([1, 2, 3, 4], [1, 4, 9, 16], "spearman", False, 1.0, 4, False),
        ([1, 2, 0, 0], [1, 2, 3, 4], "pearson", True, None, None, True),
        ([1, 2], [1, 2], "pearson", False, None, None, True),
        ([1, 2, 3], [1, 2], "pearson", False, None, None, True),
        ([1, 2, 3], [1, 2, 3], "kendall", False, None, None, True),
    ],
)
def test_correlation(x, y, method, nonzero_only, expected, n, fails):
    with pytest.raises(Exception) if fails else nullcontext():
        result = correlation(x, y, method=method, nonzero_only=nonzero_only)
        assert result.value == pytest.approx(expected)
        assert result.n == n
        assert not result.degenerate


def test_correlation_constant():
    with pytest.warns(UserWarning):
        result = correlation([1.0, 1.0, 1.0], [1.0, 2.0, 3.0])
    assert result == (0.0, 3, True)


def _star():
    g = graph_from_edges(3, [(0, 1, 0.5), (0, 2, 0.5)])
    scores = ScoreVector([0.5, 0.0, 0.0], [0.0, 0.2, 0.4])
    return g, scores


def test_neighbor_average():
    g, scores = _star()
    values, has_out = neighbor_average(g, scores.S_hat, "out")
    assert values == pytest.approx([0.3, 0.0, 0.0])
    assert list(has_out) == [True, False, False]

    values, has_in = neighbor_average(g, scores.I_hat, "in")
    assert values == pytest.approx([0.0, 0.5, 0.5])
    assert list(has_in) == [False, True, True]


@pytest.mark.parametrize(
    ["name", "expected", "fails"],
    [
        ("k_out", [2.0, 0.0, 0.0], False),
        ("k_in", [0.0, 1.0, 1.0], False),
        ("I", [0.5, 0.0, 0.0], False),
        ("S_nn_out", [0.3, 0.0, 0.0], False),
        ("k_out_nn_in", [0.0, 2.0, 2.0], False),
        ("S_nn_up", None, True),
        ("pagerank", None, True),
    ],
)
def test_node_property(name, expected, fails):
    g, scores = _star()
    with pytest.raises(ValueError) if fails else nullcontext():
        assert node_property(name, g, scores) == pytest.approx(expected)


def test_node_property_needs_scores():
    g, _ = _star()
    with pytest.raises(ValueError):
        node_property("I", g)


@pytest.mark.parametrize(
    ["name", "fails"],
    [
        ("k_in~I", False),
        ("I ~ S_nn_out", False),
        ("k_in", True),
        ("k_in~", True),
        ("a~b~c", True),
    ],
)
def test_statistic_parse(name, fails):
    with pytest.raises(ValueError) if fails else nullcontext():
        statistic = Statistic.parse(name)
        assert statistic.name == name.replace(" ", "")


def test_statistic_assortativity():
    assert Statistic.parse("I~S_nn_out").is_assortativity
    assert not Statistic.parse("k_in~I").is_assortativity


def test_evaluate_statistic(er_graph):
    value, n, _ = evaluate_statistic("k_in~k_in", er_graph, method="pearson")
    assert value == pytest.approx(1.0)
    assert n == int((er_graph.k_in > 0).sum())
