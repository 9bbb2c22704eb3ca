import logging
import numpy as np
import warnings

from typing import List, Tuple

from contagion.cascades.events import CascadeStore
from contagion.utils.common import ceil_fraction
from contagion.utils.log import log_usage


logger = logging.getLogger(__name__)


SPLIT_MODES = ("duration", "volume")


@log_usage()
def split_periods(
    store: CascadeStore, n: int, mode: str = "duration"
) -> List[CascadeStore]:
    """
    Split a store into ``n`` consecutive, non-overlapping time windows.

    With ``mode='duration'`` the inclusive range ``[t_min, t_max]`` is cut
    into ``n`` windows of equal duration; with ``mode='volume'`` the cut
    points are the timestamps splitting the events into ``n`` groups of
    (nearly) equal size. Each event lands in exactly one window by its
    timestamp, so a cascade may spread over several windows. Empty windows
    are allowed.

    Args:
        store (CascadeStore): The store to split.
        n (int): Number of periods, at least 2.
        mode (str): ``'duration'`` or ``'volume'``. Default to ``'duration'``

    Returns:
        list: ``n`` stores sharing the node mapping of ``store``.
    """
    assert n >= 2, "n must be at least 2"
    assert mode in SPLIT_MODES, f"mode must be one of {SPLIT_MODES}, got {mode}"
    assert store.n_events > 0, "Cannot split a store with an empty time range."

    t = store.timestamps
    t_min, t_max = store.time_range
    span = t_max - t_min + 1
    if n > span:
        raise ValueError(
            f"Cannot split {span} seconds of events into {n} periods."
        )

    if mode == "duration":
        window = ((t - t_min) * n) // span
    else:
        sorted_t = np.sort(t, kind="stable")
        cuts = (np.arange(1, n) * len(t)) // n
        window = np.searchsorted(sorted_t[cuts], t, side="right")

    periods = [store.subset(window == k) for k in range(n)]

    empty = [k for k, p in enumerate(periods) if p.n_events == 0]
    if empty:
        warnings.warn(f"Periods {empty} hold no event.")
    logger.info(
        "split_periods n=%d mode=%s sizes=%s", n, mode, [p.n_events for p in periods]
    )
    return periods


@log_usage()
def split_train_test(
    store: CascadeStore, train_fraction: float = 0.8
) -> Tuple[CascadeStore, CascadeStore]:
    """
    Split whole cascades into a training and a testing store.

    Cascades are ordered by root timestamp, ties broken by cascade id; the
    first ``ceil(train_fraction * n_cascades)`` go to the training store
    and the rest to the testing store.

    Args:
        store (CascadeStore): The store to split.
        train_fraction (float): Fraction of cascades used for training.
            Default to 0.8

    Returns:
        tuple: ``(train, test)`` stores sharing the node mapping of ``store``.
    """
    assert 0 < train_fraction < 1, "train_fraction must be between 0 and 1"
    if store.n_cascades < 2:
        raise ValueError(
            f"At least 2 cascades are required, found {store.n_cascades}."
        )

    # cascade_index is sorted, so positions break ties by cascade id
    order = np.lexsort((np.arange(store.n_cascades), store.root_times()))
    n_train = ceil_fraction(train_fraction, store.n_cascades)
    is_train = np.zeros(store.n_cascades, dtype=bool)
    is_train[order[:n_train]] = True

    if n_train == store.n_cascades:
        warnings.warn("The testing store is empty.")

    mask = is_train[store.cascade_codes]
    return store.subset(mask), store.subset(~mask)
