import numpy as np

from contagion.graph import DiffusionGraph
from contagion.solver import ScoreVector
from contagion.utils.log import log_usage

from .base import EdgeScoreMap, Pairs, resolve_pairs


# kind -> (node property, endpoint it is read on)
SINGLE_PROPERTIES = {
    "influence": (lambda g, s: s.I_hat, "src"),
    "susceptibility": (lambda g, s: s.S_hat, "dst"),
    "outdegree": (lambda g, s: g.k_out, "src"),
    "indegree": (lambda g, s: g.k_in, "dst"),
}


@log_usage()
def predict_single(
    kind: str,
    g_train: DiffusionGraph,
    scores: ScoreVector,
    pairs: Pairs = None,
) -> EdgeScoreMap:
    """
    Predict the contagion rate of ``i -> j`` from a single property,
    normalized by its maximum over the training network:

    - influence: ``I_hat[i] / max(I_hat)``
    - susceptibility: ``S_hat[j] / max(S_hat)``
    - outdegree: ``k_out[i] / max(k_out)``
    - indegree: ``k_in[j] / max(k_in)``

    Args:
        kind (str): One of the above.
        g_train (DiffusionGraph): Training network.
        scores (ScoreVector): Scores solved on ``g_train``.
        pairs: Pairs to score, see :func:`resolve_pairs`. Default to the
            edges of ``g_train``
    """
    if kind not in SINGLE_PROPERTIES:
        raise ValueError(
            f"Unknown predictor {kind!r}, expected one of {list(SINGLE_PROPERTIES)}."
        )
    prop, endpoint = SINGLE_PROPERTIES[kind]
    values = np.asarray(prop(g_train, scores), dtype=float)
    if values.max(initial=0) <= 0:
        raise ValueError(f"The {kind} of every node is 0.")

    src, dst = resolve_pairs(g_train, pairs)
    nodes = src if endpoint == "src" else dst
    return EdgeScoreMap(src, dst, values[nodes] / values.max(), kind)
