import numpy as np

from contagion.graph import DiffusionGraph
from contagion.solver import ScoreVector
from contagion.utils.log import log_usage

from .base import SeedRanking, _base_seed_metric


def _influence(g: DiffusionGraph, scores: ScoreVector) -> np.ndarray:
    return scores.I_hat


def _total_susceptibility(g: DiffusionGraph, scores: ScoreVector) -> np.ndarray:
    return g.adjacency @ scores.S_hat


def _total_influence(g: DiffusionGraph, scores: ScoreVector) -> np.ndarray:
    return g.adjacency @ scores.I_hat


def _total_probability(g: DiffusionGraph, scores: ScoreVector) -> np.ndarray:
    return scores.I_hat * (g.adjacency @ scores.S_hat)


def _influence_weighted_degree(g: DiffusionGraph, scores: ScoreVector) -> np.ndarray:
    return g.k_out * scores.I_hat


def _outdegree(g: DiffusionGraph, scores: ScoreVector) -> np.ndarray:
    return g.k_out.astype(float)


METRICS = {
    "influence": _influence,
    "total_susceptibility": _total_susceptibility,
    "total_influence": _total_influence,
    "total_probability": _total_probability,
    "influence_weighted_degree": _influence_weighted_degree,
    "outdegree": _outdegree,
}


@log_usage()
def seed_score(
    metric: str, g_train: DiffusionGraph, scores: ScoreVector
) -> SeedRanking:
    """
    Rank nodes as seeds of future cascades.

    The following metrics are available, for a node ``i`` with
    out-neighbours ``j``:

    - influence: ``I_hat[i]``
    - total_susceptibility: ``sum_j S_hat[j]``
    - total_influence: ``sum_j I_hat[j]``
    - total_probability: ``sum_j I_hat[i] * S_hat[j]``
    - influence_weighted_degree: ``k_out[i] * I_hat[i]``
    - outdegree: ``k_out[i]``

    Args:
        metric (str): Name of the metric.
        g_train (DiffusionGraph): Training network.
        scores (ScoreVector): Scores solved on ``g_train``.

    Returns:
        SeedRanking: The ranking of every node.
    """
    if metric not in METRICS:
        raise ValueError(
            f"Unknown metric {metric!r}, expected one of {list(METRICS)}."
        )
    return _base_seed_metric(METRICS[metric], metric, g_train, scores)
