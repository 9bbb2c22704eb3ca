import logging
import numpy as np
import pandas as pd
import warnings

from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional, Union

from contagion.graph import DiffusionGraph
from contagion.utils.common import write_frame, write_json
from contagion.utils.log import log_usage
from contagion.utils.tqdm import get_progress_bars


logger = logging.getLogger(__name__)


EPS = 1e-12


@dataclass(frozen=True)
class SolverConfig:
    """
    Settings of the influence / susceptibility solver.

    Args:
        I0 (float): Initial value of every score. Default to 1.0
        damping (float): Blend factor :math:`\\alpha` of a new iterate with
            the previous one. 1.0 is the undamped map. Default to 0.5
        tolerance (float): Relative change under which the iteration
            stops. Default to 1e-8
        max_iter (int): Maximum number of iterations. Default to 100000
    """

    I0: float = 1.0
    damping: float = 0.5
    tolerance: float = 1e-8
    max_iter: int = 100_000

    def __post_init__(self):
        assert self.I0 > 0, "I0 must be positive"
        assert 0 < self.damping <= 1, "damping must be within (0, 1]"
        assert self.tolerance > 0, "tolerance must be positive"
        assert self.max_iter >= 1, "max_iter must be at least 1"


@dataclass(frozen=True)
class ScoreVector:
    """
    Reconstructed influence and susceptibility of every node.

    A node is excluded from influence when it has no outgoing contagion
    (or none of its targets stays susceptible), and excluded from
    susceptibility symmetrically. Excluded scores are exactly 0 and do not
    enter any sum.
    """

    I_hat: np.ndarray
    S_hat: np.ndarray
    iterations: int = 0
    final_residual: float = float("inf")
    converged: bool = False
    excluded_influence: np.ndarray = field(default=None)
    excluded_susceptibility: np.ndarray = field(default=None)

    def __post_init__(self):
        I_hat = np.asarray(self.I_hat, dtype=float)
        S_hat = np.asarray(self.S_hat, dtype=float)
        assert I_hat.shape == S_hat.shape and I_hat.ndim == 1, (
            "I_hat and S_hat must be aligned 1d vectors"
        )
        assert (I_hat >= 0).all() and (S_hat >= 0).all(), "Scores must be nonnegative"
        object.__setattr__(self, "I_hat", I_hat)
        object.__setattr__(self, "S_hat", S_hat)
        if self.excluded_influence is None:
            object.__setattr__(self, "excluded_influence", I_hat == 0)
        if self.excluded_susceptibility is None:
            object.__setattr__(self, "excluded_susceptibility", S_hat == 0)
        for x in (self.I_hat, self.S_hat):
            x.setflags(write=False)

    @classmethod
    def initial(cls, g: DiffusionGraph, I0: float = 1.0) -> "ScoreVector":
        """Starting point: ``I0`` on every node with outgoing (resp.
        incoming) contagion, 0 elsewhere."""
        assert I0 > 0, "I0 must be positive"
        return cls(
            I_hat=np.where(g.f_hat > 0, I0, 0.0),
            S_hat=np.where(g.g_hat > 0, I0, 0.0),
        )

    @property
    def n_nodes(self) -> int:
        return len(self.I_hat)

    @property
    def excluded_nodes(self) -> np.ndarray:
        """Indices of nodes with at least one score set to 0."""
        return np.flatnonzero(self.excluded_influence | self.excluded_susceptibility)

    def report(self) -> dict:
        return {
            "iterations": self.iterations,
            "final_residual": self.final_residual,
            "converged": self.converged,
            "n_excluded_influence": int(self.excluded_influence.sum()),
            "n_excluded_susceptibility": int(self.excluded_susceptibility.sum()),
        }

    def to_frame(self, node_ids) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "node_id": np.asarray(node_ids, dtype=object),
                "I_hat": self.I_hat,
                "S_hat": self.S_hat,
                "excluded_influence": self.excluded_influence,
                "excluded_susceptibility": self.excluded_susceptibility,
            }
        )


def _residual(old: np.ndarray, new: np.ndarray, active: np.ndarray) -> float:
    if not active.any():
        return 0.0
    old, new = old[active], new[active]
    return float(np.max(np.abs(new - old) / np.maximum(old, EPS)))


def _step(g: DiffusionGraph, I_hat: np.ndarray, S_hat: np.ndarray, damping: float):
    # Both halves read the previous iterate only
    denom_i = g.adjacency @ S_hat
    denom_s = g.adjacency_t @ I_hat

    keep_i = (I_hat > 0) & (g.f_hat > 0) & (denom_i > 0)
    keep_s = (S_hat > 0) & (g.g_hat > 0) & (denom_s > 0)

    raw_i = np.divide(g.f_hat, denom_i, out=np.zeros_like(I_hat), where=keep_i)
    raw_s = np.divide(g.g_hat, denom_s, out=np.zeros_like(S_hat), where=keep_s)

    new_i = np.where(keep_i, (1 - damping) * I_hat + damping * raw_i, 0.0)
    new_s = np.where(keep_s, (1 - damping) * S_hat + damping * raw_s, 0.0)
    return new_i, new_s


def iterate_once(
    g: DiffusionGraph, current: ScoreVector, damping: float = 1.0
) -> ScoreVector:
    r"""
    One step of the nonlinear map

    .. math::
        \hat{I}_i \leftarrow \frac{\hat{f}_i}{\sum_j A_{ij} \hat{S}_j},
        \quad
        \hat{S}_j \leftarrow \frac{\hat{g}_j}{\sum_i A_{ij} \hat{I}_i}

    blended with the current scores as
    :math:`(1 - \alpha) \cdot \text{old} + \alpha \cdot \text{new}`.

    Args:
        g (DiffusionGraph): The diffusion network.
        current (ScoreVector): Scores before the step.
        damping (float): :math:`\alpha`. Default to 1.0

    Returns:
        ScoreVector: Scores after the step. ``final_residual`` is the
        relative change of the step.
    """
    assert 0 < damping <= 1, "damping must be within (0, 1]"
    assert current.n_nodes == g.n_nodes, "Scores and graph are not aligned."

    if g.n_edges == 0:
        warnings.warn("The graph has no edge: every node is excluded.")
        zeros = np.zeros(g.n_nodes)
        return ScoreVector(zeros, zeros, current.iterations + 1, 0.0, True)

    new_i, new_s = _step(g, current.I_hat, current.S_hat, damping)
    residual = max(
        _residual(current.I_hat, new_i, current.I_hat > 0),
        _residual(current.S_hat, new_s, current.S_hat > 0),
    )
    return ScoreVector(new_i, new_s, current.iterations + 1, residual, False)


@log_usage()
def solve(
    g: DiffusionGraph,
    cfg: Optional[SolverConfig] = None,
    show_progress: bool = False,
) -> ScoreVector:
    """
    Iterate the map until the maximum relative change of the nonzero
    scores falls under ``cfg.tolerance``, or ``cfg.max_iter`` is reached.

    The map leaves the product :math:`\\hat{I}_i \\hat{S}_j` unchanged when
    :math:`\\hat{I}` is scaled by :math:`c` and :math:`\\hat{S}` by
    :math:`1 / c`; the scale attained is set by ``cfg.I0``.

    Args:
        g (DiffusionGraph): The diffusion network.
        cfg (SolverConfig): Solver settings. Default to ``SolverConfig()``
        show_progress (bool): Display a progress bar. Default to ``False``

    Returns:
        ScoreVector: The final scores. Not converging is not an error:
        ``converged`` is then ``False`` and a warning is emitted.
    """
    cfg = cfg or SolverConfig()

    if g.n_edges == 0:
        warnings.warn("The graph has no edge: every node is excluded.")
        zeros = np.zeros(g.n_nodes)
        return ScoreVector(zeros, zeros, 0, 0.0, True)

    scores = ScoreVector.initial(g, cfg.I0)
    I_hat, S_hat = scores.I_hat, scores.S_hat
    residual = float("inf")
    iterations = 0

    pbar = get_progress_bars()(total=cfg.max_iter, desc="IS solver") if show_progress else None
    try:
        while iterations < cfg.max_iter:
            new_i, new_s = _step(g, I_hat, S_hat, cfg.damping)
            residual = max(
                _residual(I_hat, new_i, I_hat > 0),
                _residual(S_hat, new_s, S_hat > 0),
            )
            I_hat, S_hat = new_i, new_s
            iterations += 1
            if pbar is not None:
                pbar.update()
                if iterations % 100 == 0:
                    pbar.set_postfix(residual=f"{residual:.2e}")
            if residual <= cfg.tolerance:
                break
    finally:
        if pbar is not None:
            pbar.close()

    converged = residual <= cfg.tolerance
    if not converged:
        warnings.warn(
            f"The solver did not converge in {iterations} iterations, "
            f"final relative change: {residual:.3e}"
        )
    logger.info(
        "solve iterations=%d residual=%.3e converged=%s", iterations, residual, converged
    )
    return ScoreVector(I_hat, S_hat, iterations, residual, converged)


def predicted_rate(scores: ScoreVector, g: DiffusionGraph, i: int, j: int) -> float:
    r"""
    Predicted contagion rate :math:`A_{ij} \hat{I}_i \hat{S}_j`, 0 when the
    edge is absent or an endpoint is excluded.
    """
    if not g.has_edge(i, j):
        return 0.0
    return float(scores.I_hat[i] * scores.S_hat[j])


def predicted_rates(scores: ScoreVector, g: DiffusionGraph) -> np.ndarray:
    """:func:`predicted_rate` of every edge of ``g``, in edge order."""
    return scores.I_hat[g.src] * scores.S_hat[g.dst]


def rescale(scores: ScoreVector, c: float) -> ScoreVector:
    """Move along the gauge: influence times ``c``, susceptibility over ``c``."""
    assert c > 0, "c must be positive"
    return replace(
        scores,
        I_hat=scores.I_hat * c,
        S_hat=scores.S_hat / c,
        excluded_influence=scores.excluded_influence,
        excluded_susceptibility=scores.excluded_susceptibility,
    )


def write_scores(
    scores: ScoreVector,
    node_ids,
    scores_path: Union[str, Path],
    report_path: Optional[Union[str, Path]] = None,
    spectral_radius: Optional[float] = None,
    config_hash: Optional[str] = None,
) -> None:
    """
    Write the scores CSV and, optionally, the JSON solver report.
    """
    write_frame(scores.to_frame(node_ids), scores_path, config_hash=config_hash)
    if report_path is not None:
        report = scores.report()
        if spectral_radius is not None:
            report["spectral_radius"] = spectral_radius
        write_json(report, report_path, config_hash=config_hash)
