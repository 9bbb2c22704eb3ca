import logging
import networkx as nx
import pandas as pd

from pathlib import Path
from typing import Union

from contagion.graph import DiffusionGraph
from contagion.utils.log import log_usage


logger = logging.getLogger(__name__)


def node_labels(n: int) -> list:
    """Zero padded ids ``n00``, ``n01``, ... sorting like their indices."""
    width = len(str(max(n - 1, 0)))
    return [f"n{k:0{width}d}" for k in range(n)]


def _labelled(graph: nx.DiGraph) -> DiffusionGraph:
    graph.remove_edges_from(list(nx.selfloop_edges(graph)))
    graph = nx.relabel_nodes(graph, dict(enumerate(node_labels(len(graph)))))
    return DiffusionGraph.from_networkx(graph)


@log_usage()
def random_topology(n: int, mean_degree: float, rng_seed: int) -> DiffusionGraph:
    """
    Directed Erdos-Renyi topology: every ordered pair of distinct nodes is
    an edge with probability ``mean_degree / (n - 1)``.

    Args:
        n (int): Number of nodes, at least 2.
        mean_degree (float): Expected out-degree of a node.
        rng_seed (int): Seed of the draw.

    Returns:
        DiffusionGraph: Unit weighted graph with ids from :func:`node_labels`.
    """
    assert n >= 2, "n must be at least 2"
    assert 0 <= mean_degree <= n - 1, "mean_degree must be within [0, n - 1]"
    return _labelled(
        nx.gnp_random_graph(n, mean_degree / (n - 1), seed=rng_seed, directed=True)
    )


@log_usage()
def scale_free_topology(n: int, rng_seed: int) -> DiffusionGraph:
    """
    Directed scale-free topology grown by preferential attachment, with
    heavy tailed in- and out-degrees. Parallel edges and self-loops of the
    growth process are dropped.

    Args:
        n (int): Number of nodes, at least 3.
        rng_seed (int): Seed of the draw.

    Returns:
        DiffusionGraph: Unit weighted graph with ids from :func:`node_labels`.
    """
    assert n >= 3, "n must be at least 3"
    return _labelled(nx.DiGraph(nx.scale_free_graph(n, seed=rng_seed)))


@log_usage()
def read_topology(path: Union[str, Path]) -> DiffusionGraph:
    """
    Read a topology from an edge list.

    A ``.csv`` file needs ``src`` and ``dst`` columns, like the
    ``topology.csv`` written by ``contagion simulate``. Any other file holds
    one whitespace separated ``u v`` pair per line, extra columns being
    ignored. Lines starting with ``#`` are comments. Self-loops and repeated
    edges are dropped, and nodes are ordered by id. Nodes without edges
    cannot be represented.

    Args:
        path (str or Path): The edge list.

    Returns:
        DiffusionGraph: Unit weighted graph.

    Raises:
        ValueError: If the file has no edge between distinct nodes.
    """
    path = Path(path)
    if path.suffix == ".csv":
        frame = pd.read_csv(path, comment="#", dtype=str)
        missing = {"src", "dst"} - set(frame.columns)
        if missing:
            raise ValueError(f"{path}: missing columns {sorted(missing)}.")
        graph = nx.from_pandas_edgelist(frame, "src", "dst", create_using=nx.DiGraph)
    else:
        graph = nx.read_edgelist(
            path, comments="#", create_using=nx.DiGraph, nodetype=str, data=False
        )
    graph.remove_edges_from(list(nx.selfloop_edges(graph)))
    if graph.number_of_edges() == 0:
        raise ValueError(f"{path}: no edge between distinct nodes.")

    ordered = nx.DiGraph()
    ordered.add_nodes_from(sorted(graph.nodes()))
    ordered.add_edges_from(graph.edges())
    logger.info(
        "topology=%s n_nodes=%d n_edges=%d",
        path,
        ordered.number_of_nodes(),
        ordered.number_of_edges(),
    )
    return DiffusionGraph.from_networkx(ordered)
