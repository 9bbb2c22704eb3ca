import logging
import numpy as np
import scipy.stats
import warnings

from typing import NamedTuple

from contagion.utils.common import _validate_aligned


logger = logging.getLogger(__name__)


METHODS = ("pearson", "spearman")


class Correlation(NamedTuple):
    value: float
    n: int
    degenerate: bool = False


def correlation(
    x: np.ndarray,
    y: np.ndarray,
    method: str = "pearson",
    nonzero_only: bool = False,
) -> Correlation:
    """
    Pearson or Spearman correlation of two aligned vectors.

    Args:
        x (np.ndarray): First vector.
        y (np.ndarray): Second vector.
        method (str): ``'pearson'`` or ``'spearman'``. Default to
            ``'pearson'``
        nonzero_only (bool): Only keep the pairs where both entries are
            nonzero. Default to ``False``

    Returns:
        Correlation: The value, the number of pairs used, and whether an
        input had no variance, in which case the value is 0.

    Examples:
        >>> from contagion.stats import correlation
        >>> correlation([1, 2, 3, 0], [2, 4, 6, 5], nonzero_only=True)
        Correlation(value=1.0, n=3, degenerate=False)
    """
    assert method in METHODS, f"method must be one of {METHODS}, got {method}"
    x, y = _validate_aligned(x, y)
    assert np.isfinite(x).all() and np.isfinite(y).all(), "Values must be finite."

    if nonzero_only:
        keep = (x != 0) & (y != 0)
        x, y = x[keep], y[keep]

    n = len(x)
    if n < 3:
        raise ValueError(f"A correlation needs at least 3 pairs, got {n}.")

    if np.ptp(x) == 0 or np.ptp(y) == 0:
        warnings.warn("Correlation of a constant vector, reported as 0.")
        return Correlation(0.0, n, True)

    if method == "pearson":
        value = scipy.stats.pearsonr(x, y)[0]
    else:
        value = scipy.stats.spearmanr(x, y)[0]
    return Correlation(float(np.clip(value, -1.0, 1.0)), n, False)
