import numpy as np
import pandas as pd

from dataclasses import dataclass
from typing import Callable

from contagion.graph import DiffusionGraph
from contagion.solver import ScoreVector


@dataclass(frozen=True)
class SeedRanking:
    """
    Score of every node as a seed under one metric, with the induced order:
    decreasing score, ties broken by increasing node index.
    """

    metric: str
    scores: np.ndarray

    def __post_init__(self):
        scores = np.asarray(self.scores, dtype=float)
        assert scores.ndim == 1, "scores must be a 1d vector"
        assert np.isfinite(scores).all(), "scores must be finite"
        object.__setattr__(self, "scores", scores)

    @property
    def n_nodes(self) -> int:
        return len(self.scores)

    @property
    def order(self) -> np.ndarray:
        """Node indices from the best seed to the worst."""
        return np.lexsort((np.arange(self.n_nodes), -self.scores))

    def top(self, k: int, domain: np.ndarray = None) -> np.ndarray:
        """The ``k`` best nodes, optionally among a subset of nodes."""
        order = self.order
        if domain is not None:
            order = order[np.isin(order, domain)]
        return order[:k]

    def to_series(self) -> pd.Series:
        return pd.Series(self.scores, name=self.metric)


def _base_seed_metric(
    metric: Callable, name: str, g_train: DiffusionGraph, scores: ScoreVector
) -> SeedRanking:
    assert scores.n_nodes == g_train.n_nodes, "Scores and graph are not aligned."
    return SeedRanking(name, metric(g_train, scores))
