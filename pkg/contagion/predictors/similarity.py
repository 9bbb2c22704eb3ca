import numpy as np
import scipy.sparse as sp

from typing import Callable, Dict

from contagion.graph import DiffusionGraph
from contagion.utils.log import log_usage

from .base import EdgeScoreMap, Pairs, resolve_pairs


DIRECTIONS = ("in", "out")


def _common_neighbors(common, size_i, size_j, degree):
    return np.asarray(common.sum(axis=1)).ravel()


def _jaccard(common, size_i, size_j, degree):
    cn = _common_neighbors(common, size_i, size_j, degree)
    union = size_i + size_j - cn
    return np.divide(cn, union, out=np.zeros_like(cn), where=union > 0)


def _sorensen(common, size_i, size_j, degree):
    cn = _common_neighbors(common, size_i, size_j, degree)
    total = size_i + size_j
    return np.divide(2 * cn, total, out=np.zeros_like(cn), where=total > 0)


def _adamic_adar(common, size_i, size_j, degree):
    with np.errstate(divide="ignore"):
        w = 1 / np.log(degree)
    # log(1) = 0
    w[~np.isfinite(w)] = 0
    return common @ w


def _resource_allocation(common, size_i, size_j, degree):
    with np.errstate(divide="ignore"):
        w = 1 / degree
    w[~np.isfinite(w)] = 0
    return common @ w


SIMILARITIES: Dict[str, Callable] = {
    "CN": _common_neighbors,
    "Jaccard": _jaccard,
    "Sorensen": _sorensen,
    "AA": _adamic_adar,
    "RA": _resource_allocation,
}


@log_usage()
def similarity(
    kind: str,
    g_train: DiffusionGraph,
    direction: str = "in",
    pairs: Pairs = None,
    batch_size: int = 32768,
) -> EdgeScoreMap:
    """
    Neighbourhood similarity of the endpoints of every pair.

    With :math:`\\Gamma(x)` the in- or out-neighbours of :math:`x` and
    :math:`k_z` the total degree of :math:`z` in ``g_train``:

    - CN: :math:`|\\Gamma(i) \\cap \\Gamma(j)|`
    - Jaccard: :math:`|\\Gamma(i) \\cap \\Gamma(j)| / |\\Gamma(i) \\cup \\Gamma(j)|`
    - Sorensen: :math:`2 |\\Gamma(i) \\cap \\Gamma(j)| / (|\\Gamma(i)| + |\\Gamma(j)|)`
    - AA: :math:`\\sum_{z \\in \\Gamma(i) \\cap \\Gamma(j)} 1 / \\log k_z`
    - RA: :math:`\\sum_{z \\in \\Gamma(i) \\cap \\Gamma(j)} 1 / k_z`

    Empty denominators give 0, and so do AA terms with :math:`k_z = 1`.

    Args:
        kind (str): One of the above.
        g_train (DiffusionGraph): Training network.
        direction (str): ``'in'`` or ``'out'`` neighbourhoods.
            Default to ``'in'``
        pairs: Pairs to score, see :func:`resolve_pairs`. Default to the
            edges of ``g_train``
        batch_size (int): Pairs scored at once. Default to 32768

    Returns:
        EdgeScoreMap: Named ``<kind>_<direction>``.
    """
    if kind not in SIMILARITIES:
        raise ValueError(
            f"Unknown similarity {kind!r}, expected one of {list(SIMILARITIES)}."
        )
    assert direction in DIRECTIONS, f"direction must be one of {DIRECTIONS}"

    neighbors = g_train.adjacency_t if direction == "in" else g_train.adjacency
    size = (g_train.k_in if direction == "in" else g_train.k_out).astype(float)
    degree = (g_train.k_in + g_train.k_out).astype(float)
    func = SIMILARITIES[kind]

    src, dst = resolve_pairs(g_train, pairs)
    scores = np.zeros(len(src))
    for start in range(0, len(src), batch_size):
        i = src[start : start + batch_size]
        j = dst[start : start + batch_size]
        common = sp.csr_matrix(neighbors[i].multiply(neighbors[j]))
        scores[start : start + batch_size] = func(common, size[i], size[j], degree)

    return EdgeScoreMap(src, dst, scores, f"{kind}_{direction}")
