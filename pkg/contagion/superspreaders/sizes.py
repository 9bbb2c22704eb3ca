import logging
import numpy as np
import pandas as pd

from contagion.cascades import CascadeStore
from contagion.utils.log import log_usage


logger = logging.getLogger(__name__)


AGGREGATES = ("mean", "median")


@log_usage()
def realized_sizes(test: CascadeStore, aggregate: str = "mean") -> pd.Series:
    """
    Spreading size of every seed: over the cascades it started, the mean
    (or median) number of distinct participants, root included.

    The seed of a cascade is the user of its earliest root event; cascades
    without a root event are ignored.

    Args:
        test (CascadeStore): Test cascades.
        aggregate (str): ``'mean'`` or ``'median'``. Default to ``'mean'``

    Returns:
        pd.Series: Sizes indexed by seed node index, sorted by index.
    """
    assert aggregate in AGGREGATES, f"aggregate must be one of {AGGREGATES}"
    n = max(test.n_nodes, 1)
    has_parent = test.parents >= 0

    codes = np.concatenate([test.cascade_codes, test.cascade_codes[has_parent]])
    nodes = np.concatenate([test.users, test.parents[has_parent]])
    pairs = np.unique(codes * n + nodes)
    size = pd.Series(np.ones(len(pairs), dtype=np.int64)).groupby(pairs // n).sum()

    # Events are sorted by time within a cascade
    roots = pd.Series(test.users[~has_parent]).groupby(
        test.cascade_codes[~has_parent]
    ).first()
    n_orphans = test.n_cascades - len(roots)
    if n_orphans:
        logger.info("realized_sizes cascades_without_root=%d", n_orphans)

    sizes = pd.Series(size.loc[roots.index].to_numpy(), index=roots.to_numpy())
    out = sizes.groupby(level=0).agg(aggregate).astype(float).sort_index()
    out.index.name = "node"
    out.name = "realized_size"
    return out
