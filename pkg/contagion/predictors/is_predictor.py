from contagion.graph import DiffusionGraph
from contagion.solver import ScoreVector
from contagion.utils.log import log_usage

from .base import EdgeScoreMap, Pairs, resolve_pairs


@log_usage()
def predict_is(
    g_train: DiffusionGraph, scores: ScoreVector, pairs: Pairs = None
) -> EdgeScoreMap:
    r"""
    Predict :math:`\hat{\omega}_{ij} = \hat{I}_i \hat{S}_j` on every pair.
    The prediction does not depend on the scale the solver converged to.

    Args:
        g_train (DiffusionGraph): Training network.
        scores (ScoreVector): Scores solved on ``g_train``.
        pairs: Pairs to score, see :func:`resolve_pairs`. Default to the
            edges of ``g_train``
    """
    assert scores.n_nodes == g_train.n_nodes, "Scores and graph are not aligned."
    src, dst = resolve_pairs(g_train, pairs)
    return EdgeScoreMap(src, dst, scores.I_hat[src] * scores.S_hat[dst], "IS")
