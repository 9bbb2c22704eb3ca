import numpy as np
import pytest

from contagion.solver import (
    ScoreVector,
    SolverConfig,
    gauge_vectors,
    jacobian,
    jacobian_spectral_radius,
    solve,
)
from tests.basic_graphs import graph_from_edges, single_edge, two_cycle


def _fixed_point(value, n=2):
    return ScoreVector(np.full(n, value), np.full(n, value))


@pytest.mark.parametrize(
    ["damping", "radius"],
    [
        (1.0, 1.0),
        (0.5, 0.0),
    ],
)
def test_two_cycle_radius(damping, radius):
    scores = _fixed_point(np.sqrt(0.3))
    rho = jacobian_spectral_radius(two_cycle(0.3), scores, damping=damping)
    assert rho == pytest.approx(radius, abs=1e-9)


def test_single_edge_radius():
    scores = ScoreVector(np.array([0.5, 0.0]), np.array([0.0, 0.5]))
    assert jacobian_spectral_radius(single_edge(0.25), scores) == pytest.approx(1.0)
    assert jacobian_spectral_radius(
        single_edge(0.25), scores, damping=0.5
    ) == pytest.approx(0.0, abs=1e-12)


def test_gauge_is_eigenvector():
    g = two_cycle(0.3)
    scores = _fixed_point(np.sqrt(0.3))
    jac, act_i, act_s = jacobian(g, scores, damping=0.5)
    vectors = gauge_vectors(g, scores)
    # v0 -> v1 and v1 -> v0 are two components
    assert vectors.shape == (2, 4)
    for v in vectors:
        assert np.allclose(jac @ v, v)


def test_converged_radius(er_graph):
    scores = solve(er_graph, SolverConfig(tolerance=1e-12))
    rho = jacobian_spectral_radius(er_graph, scores, damping=0.5)
    assert 0 <= rho < 1
    raw = jacobian_spectral_radius(er_graph, scores, damping=0.5, deflate_gauge=False)
    assert raw == pytest.approx(1.0, abs=1e-6)


def test_iterative_radius(er_graph):
    scores = solve(er_graph, SolverConfig(tolerance=1e-12))
    dense = jacobian_spectral_radius(er_graph, scores, damping=0.5)
    sparse = jacobian_spectral_radius(er_graph, scores, damping=0.5, dense_cap=0)
    assert sparse == pytest.approx(dense, rel=1e-2)


def test_jacobian_edgeless():
    g = graph_from_edges(3, [])
    scores = ScoreVector(np.zeros(3), np.zeros(3))
    with pytest.raises(ValueError):
        jacobian(g, scores)
