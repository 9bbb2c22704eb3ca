import numpy as np

from typing import Optional, Tuple

from contagion.graph import DiffusionGraph
from contagion.solver import ScoreVector


DIRECTIONS = ("in", "out")


def neighbor_average(
    g: DiffusionGraph, prop: np.ndarray, direction: str = "out"
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Mean of a node property over the in- or out-neighbours of every node.

    Args:
        g (DiffusionGraph): The network.
        prop (np.ndarray): One value per node.
        direction (str): ``'in'`` or ``'out'``. Default to ``'out'``

    Returns:
        2-tuple: The averages, 0 for nodes without such neighbours, and a
        mask of the nodes having at least one.
    """
    assert direction in DIRECTIONS, f"direction must be one of {DIRECTIONS}"
    prop = np.asarray(prop, dtype=float)
    assert prop.shape == (g.n_nodes,), "prop must have one value per node"

    if direction == "out":
        total, count = g.adjacency @ prop, g.k_out
    else:
        total, count = g.adjacency_t @ prop, g.k_in
    has_neighbors = count > 0
    values = np.divide(total, count, out=np.zeros(g.n_nodes), where=has_neighbors)
    return values, has_neighbors


BASE_PROPERTIES = ("k_in", "k_out", "I", "S", "f", "g")


def node_property(
    name: str, g: DiffusionGraph, scores: Optional[ScoreVector] = None
) -> np.ndarray:
    """
    Node property by name: ``k_in``, ``k_out``, ``I``, ``S``, ``f`` and
    ``g`` (measured contagion rates), or ``<prop>_nn_<in|out>`` for the
    neighbour average of one of them.
    """
    if "_nn_" in name:
        base, direction = name.rsplit("_nn_", 1)
        if direction not in DIRECTIONS:
            raise ValueError(f"Unknown neighbour direction in {name!r}.")
        return neighbor_average(g, node_property(base, g, scores), direction)[0]

    if name in ("I", "S"):
        if scores is None:
            raise ValueError(f"Property {name!r} needs solved scores.")
        assert scores.n_nodes == g.n_nodes, "Scores and graph are not aligned."
        return scores.I_hat if name == "I" else scores.S_hat

    table = {"k_in": g.k_in, "k_out": g.k_out, "f": g.f_hat, "g": g.g_hat}
    if name not in table:
        raise ValueError(
            f"Unknown property {name!r}, expected one of {BASE_PROPERTIES} "
            "or <prop>_nn_<in|out>."
        )
    return np.asarray(table[name], dtype=float)
