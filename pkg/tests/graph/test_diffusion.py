import networkx as nx
import numpy as np
import pandas as pd
import pytest

from contextlib import nullcontext

from contagion.graph import (
    DiffusionGraph,
    build_graph,
    filter_edges_min_count,
    in_rate,
    out_rate,
    write_graph,
)
from tests.basic_graphs import graph_from_edges, single_edge, store_from_rows


def _omega(g, i, j):
    k = g.edge_position(g.node_ids.tolist().index(i), g.node_ids.tolist().index(j))
    assert k >= 0, f"no edge {i} -> {j}"
    return g.omega[k]


def test_build_graph_small(store):
    g = build_graph(store)
    assert g.n_nodes == 3
    assert g.n_edges == 2
    assert _omega(g, "u1", "u2") == 1.0
    assert _omega(g, "u2", "u3") == 0.5
    assert list(g.raw_count) == [2, 1]
    assert list(g.items_shared) == [2, 2, 2]


def test_build_graph_fraction():
    # i shares four cascades, j reshares two of them from i
    rows = [(f"c{k}", "i", None, 10 * k) for k in range(4)]
    rows += [("c0", "j", "i", 1), ("c2", "j", "i", 21)]
    g = build_graph(store_from_rows(rows))
    assert _omega(g, "i", "j") == 0.5
    assert out_rate(g, 0) == 0.5
    assert in_rate(g, 1) == 0.5


def test_build_graph_counts_cascades_once():
    rows = [("c1", "a", None, 1), ("c1", "b", "a", 2), ("c1", "b", "a", 3)]
    g = build_graph(store_from_rows(rows))
    assert g.n_edges == 1
    assert g.omega[0] == 1.0
    assert g.raw_count[0] == 2


def test_build_graph_ignores_flagged():
    rows = [("c1", "a", None, 10), ("c1", "b", "a", 5), ("c2", "a", None, 20)]
    store = store_from_rows(rows)
    assert store.flagged.sum() == 1
    g = build_graph(store)
    assert g.n_edges == 0


def test_build_graph_roots_only():
    rows = [(f"c{k}", f"u{k}", None, k) for k in range(5)]
    g = build_graph(store_from_rows(rows))
    assert g.n_nodes == 5
    assert g.n_edges == 0
    assert np.array_equal(g.f_hat, np.zeros(5))


def test_rates_mass(er_graph):
    assert np.isclose(er_graph.f_hat.sum(), er_graph.g_hat.sum())
    assert np.isclose(er_graph.f_hat.sum(), er_graph.omega.sum())
    assert np.array_equal(er_graph.k_out, np.asarray(er_graph.adjacency.sum(axis=1)).ravel())
    assert np.array_equal(er_graph.k_in, np.asarray(er_graph.adjacency.sum(axis=0)).ravel())


@pytest.mark.parametrize(
    ["edges", "node", "f", "g"],
    [
        ([(0, 1, 0.2), (0, 2, 0.4)], 0, 0.6, 0.0),
        ([(0, 1, 0.2), (0, 2, 0.4)], 3, 0.0, 0.0),
        ([(0, 1, 0.25)], 0, 0.25, 0.0),
        ([(0, 3, 0.1), (1, 3, 0.3)], 3, 0.0, 0.4),
        ([(2, 1, 0.9)], 1, 0.0, 0.9),
    ],
)
def test_rates(edges, node, f, g):
    graph = graph_from_edges(4, edges)
    assert out_rate(graph, node) == pytest.approx(f)
    assert in_rate(graph, node) == pytest.approx(g)


@pytest.mark.parametrize(
    ["src", "dst", "omega", "fails"],
    [
        ([0, 1], [1, 2], [0.1, 1.0], False),
        ([1, 0], [2, 1], [0.0, 0.5], False),
        ([0], [0], [0.5], True),
        ([0, 0], [1, 1], [0.5, 0.5], True),
        ([0], [1], [1.5], True),
        ([0], [1], [-0.1], True),
        ([0], [3], [0.5], True),
        ([0, 1], [1], [0.5], True),
    ],
)
def test_graph_init(src, dst, omega, fails):
    with pytest.raises(Exception) if fails else nullcontext():
        g = DiffusionGraph(["a", "b", "c"], src, dst, omega)
        assert g.n_edges == len(src)
        assert np.all(np.diff(g.src * 3 + g.dst) > 0)


def test_graph_sorts_edges():
    g = DiffusionGraph(["a", "b", "c"], [2, 0, 0], [0, 2, 1], [0.3, 0.2, 0.1])
    assert list(g.src) == [0, 0, 2]
    assert list(g.dst) == [1, 2, 0]
    assert list(g.omega) == [0.1, 0.2, 0.3]
    assert g.weights[0, 2] == 0.2


def test_weights_keep_zeros():
    g = graph_from_edges(3, [(0, 1, 0.0), (1, 2, 0.5)])
    assert g.weights.nnz == 2
    assert g.adjacency.sum() == 2
    assert g.f_hat[0] == 0.0


def test_lookup():
    g = graph_from_edges(3, [(0, 1, 0.2), (1, 2, 0.5)])
    assert list(g.lookup([0, 1, 2, 0], [1, 2, 0, 2])) == [0.2, 0.5, 0.0, 0.0]
    assert g.has_edge(0, 1)
    assert not g.has_edge(1, 0)
    assert list(graph_from_edges(3, []).lookup([0], [1])) == [0.0]


def test_networkx_conversion():
    graph = nx.DiGraph()
    graph.add_edge("x", "y", omega=0.4)
    graph.add_edge("y", "z")
    g = DiffusionGraph.from_networkx(graph)
    assert list(g.node_ids) == ["x", "y", "z"]
    assert list(g.omega) == [0.4, 1.0]

    back = g.to_networkx()
    assert back["x"]["y"]["omega"] == 0.4
    assert back.number_of_edges() == 2


def test_with_weights_and_subgraph():
    g = graph_from_edges(3, [(0, 1, 0.2), (1, 2, 0.5)])
    h = g.with_weights([1.0, 1.0])
    assert list(h.f_hat) == [1.0, 1.0, 0.0]
    assert np.array_equal(h.src, g.src)

    s = g.subgraph([False, True])
    assert s.n_nodes == 3
    assert s.n_edges == 1
    assert s.omega[0] == 0.5


@pytest.mark.parametrize(
    ["n_reshares", "min_reshares", "kept"],
    [
        (2, 3, False),
        (3, 3, True),
        (4, 3, True),
        (1, 1, True),
    ],
)
def test_filter_edges_min_count(n_reshares, min_reshares, kept):
    rows = [(f"c{k}", "a", None, 10 * k) for k in range(n_reshares)]
    rows += [(f"c{k}", "b", "a", 10 * k + 1) for k in range(n_reshares)]
    store = store_from_rows(rows)
    g = build_graph(store)
    assert g.raw_count[0] == n_reshares

    filtered = filter_edges_min_count(g, min_reshares=min_reshares)
    assert filtered.n_nodes == g.n_nodes
    assert filtered.n_edges == int(kept)

    recounted = filter_edges_min_count(g, store, min_reshares=min_reshares)
    assert recounted.n_edges == int(kept)


def test_filter_edges_recount_other_store(store):
    g = build_graph(store)
    later = store.subset(store.timestamps >= 200)
    filtered = filter_edges_min_count(g, later, min_reshares=1)
    # Only u1 -> u2 is reshared after t = 200
    assert filtered.n_edges == 1
    assert g.node_ids[filtered.src[0]] == "u1"


def test_filter_edges_min_count_identity(er_graph):
    assert filter_edges_min_count(er_graph, min_reshares=1).n_edges == er_graph.n_edges
    with pytest.raises(AssertionError):
        filter_edges_min_count(er_graph, min_reshares=0)


def test_write_graph(tmp_path, store):
    g = build_graph(store)
    write_graph(g, tmp_path / "edges.csv", tmp_path / "nodes.csv", config_hash="h")
    edges = pd.read_csv(tmp_path / "edges.csv", comment="#")
    nodes = pd.read_csv(tmp_path / "nodes.csv", comment="#")
    assert list(edges.columns) == ["src", "dst", "omega", "raw_count"]
    assert list(nodes.columns) == ["node_id", "k_in", "k_out", "f_hat", "g_hat", "items_shared"]
    assert edges["omega"].tolist() == [1.0, 0.5]
    assert nodes["k_out"].tolist() == [1, 1, 0]


def test_single_edge_repr():
    assert repr(single_edge()) == "DiffusionGraph(n_nodes=2, n_edges=1)"
