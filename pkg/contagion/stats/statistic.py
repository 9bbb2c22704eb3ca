from dataclasses import dataclass
from typing import Optional

from contagion.graph import DiffusionGraph
from contagion.solver import ScoreVector

from .correlation import METHODS, Correlation, correlation
from .neighbors import node_property


@dataclass(frozen=True)
class Statistic:
    """
    Correlation between two node properties, addressed as ``"x~y"``, e.g.
    ``"k_in~I"`` or the assortativity ``"I~S_nn_out"``.

    Args:
        x (str): First property, see :func:`node_property`.
        y (str): Second property.
        method (str): ``'pearson'`` or ``'spearman'``. Default to
            ``'spearman'``
        nonzero_only (bool): Drop pairs with a zero entry. Default to True
    """

    x: str
    y: str
    method: str = "spearman"
    nonzero_only: bool = True

    def __post_init__(self):
        assert self.method in METHODS, f"method must be one of {METHODS}"

    @classmethod
    def parse(cls, name: str, method: str = "spearman", nonzero_only: bool = True):
        parts = name.split("~")
        if len(parts) != 2 or not all(parts):
            raise ValueError(f"Statistic names read 'x~y', got {name!r}.")
        return cls(parts[0].strip(), parts[1].strip(), method, nonzero_only)

    @property
    def name(self) -> str:
        return f"{self.x}~{self.y}"

    @property
    def is_assortativity(self) -> bool:
        return "_nn_" in self.x or "_nn_" in self.y

    def evaluate(
        self, g: DiffusionGraph, scores: Optional[ScoreVector] = None
    ) -> Correlation:
        return correlation(
            node_property(self.x, g, scores),
            node_property(self.y, g, scores),
            method=self.method,
            nonzero_only=self.nonzero_only,
        )


NODE_STATISTICS = ("k_in~k_out", "k_in~I", "k_in~S", "k_out~I", "k_out~S", "I~S")

ASSORTATIVITY_STATISTICS = ("k_in~I_nn_in", "k_out~S_nn_out", "I~S_nn_out", "S~I_nn_in")


def evaluate_statistic(
    name: str,
    g: DiffusionGraph,
    scores: Optional[ScoreVector] = None,
    method: str = "spearman",
    nonzero_only: bool = True,
) -> Correlation:
    """Evaluate a statistic given by name, see :class:`Statistic`."""
    return Statistic.parse(name, method, nonzero_only).evaluate(g, scores)
