import numpy as np
import pandas as pd

from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Tuple, Union

from contagion.graph import DiffusionGraph
from contagion.utils.common import write_frame


Pairs = Union[None, DiffusionGraph, Tuple[np.ndarray, np.ndarray]]


@dataclass(frozen=True)
class EdgeScoreMap:
    """
    Predicted contagion rate of directed node pairs.

    Args:
        src (np.ndarray): Source index of each pair.
        dst (np.ndarray): Destination index of each pair.
        scores (np.ndarray): Nonnegative prediction of each pair.
        name (str): Predictor which produced the map.
    """

    src: np.ndarray
    dst: np.ndarray
    scores: np.ndarray
    name: str

    def __post_init__(self):
        src = np.asarray(self.src, dtype=np.int64)
        dst = np.asarray(self.dst, dtype=np.int64)
        scores = np.asarray(self.scores, dtype=float)
        assert src.shape == dst.shape == scores.shape, "Inconsistent number of pairs."
        assert (scores >= 0).all(), "Scores must be nonnegative."
        object.__setattr__(self, "src", src)
        object.__setattr__(self, "dst", dst)
        object.__setattr__(self, "scores", scores)

    def __len__(self) -> int:
        return len(self.scores)

    def as_dict(self) -> dict:
        return {
            (int(i), int(j)): float(s)
            for i, j, s in zip(self.src, self.dst, self.scores)
        }

    def to_frame(self, node_ids=None) -> pd.DataFrame:
        src, dst = self.src, self.dst
        if node_ids is not None:
            node_ids = np.asarray(node_ids, dtype=object)
            src, dst = node_ids[src], node_ids[dst]
        return pd.DataFrame(
            {"predictor": self.name, "src": src, "dst": dst, "score": self.scores}
        )

    def write_csv(
        self,
        dest: Union[str, Path],
        node_ids=None,
        config_hash: Optional[str] = None,
    ) -> None:
        write_frame(self.to_frame(node_ids), dest, config_hash=config_hash)


def resolve_pairs(g: DiffusionGraph, pairs: Pairs = None) -> Tuple[np.ndarray, np.ndarray]:
    """
    Pairs to score: the edges of ``g`` by default, the edges of another graph
    on the same nodes (e.g. ``g`` after a min-count filter), or explicit
    ``(src, dst)`` index arrays.
    """
    if pairs is None:
        return g.src, g.dst
    if isinstance(pairs, DiffusionGraph):
        assert pairs.n_nodes == g.n_nodes, "Both graphs must share their nodes."
        return pairs.src, pairs.dst
    src, dst = (np.asarray(x, dtype=np.int64) for x in pairs)
    assert src.shape == dst.shape, "src and dst must be aligned."
    assert ((src >= 0) & (src < g.n_nodes) & (dst >= 0) & (dst < g.n_nodes)).all(), (
        "Invalid node index in pairs."
    )
    return src, dst
