import logging
import numpy as np
import warnings

from dataclasses import dataclass
from functools import partial
from typing import Optional, Tuple, Union

from contagion.graph import DiffusionGraph
from contagion.solver import ScoreVector, SolverConfig, solve
from contagion.utils.common import make_generator
from contagion.utils.log import log_usage
from contagion.utils.parallel import parallel_map

from .statistic import Statistic


logger = logging.getLogger(__name__)


SIGNIFICANCE = 0.05


@dataclass(frozen=True)
class NullTestResult:
    """
    Outcome of a null-model test.

    ``p_greater`` is the fraction of realizations whose statistic is at
    least the observed one, ``p_less`` the fraction at most the observed
    one; ties count on both sides. Realizations where the statistic is
    undefined, or whose scores did not converge, are dropped and counted in
    ``n_dropped``.
    """

    statistic: str
    model: str
    observed: float
    null_values: Tuple[float, ...]
    p_greater: float
    p_less: float
    n_real: int
    n_dropped: int
    rng_seed: int

    @property
    def p_value(self) -> float:
        """One-sided p-value in the direction of the observed sign."""
        return self.p_greater if self.observed >= 0 else self.p_less

    @property
    def significant(self) -> bool:
        return self.p_value < SIGNIFICANCE


def _as_statistic(statistic: Union[str, Statistic]) -> Statistic:
    return Statistic.parse(statistic) if isinstance(statistic, str) else statistic


def _p_values(observed: float, values: np.ndarray) -> Tuple[float, float]:
    if len(values) == 0:
        raise ValueError("The statistic is undefined on every null realization.")
    return float(np.mean(values >= observed)), float(np.mean(values <= observed))


def _evaluate_or_none(statistic: Statistic, g, scores) -> Optional[float]:
    try:
        return statistic.evaluate(g, scores).value
    except ValueError:
        return None


def _weights_realization(seed_seq, g, statistic, cfg):
    rng = make_generator(seed_seq)
    g_null = g.with_weights(rng.random(g.n_edges))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        scores = solve(g_null, cfg)
    if not scores.converged:
        return None
    return _evaluate_or_none(statistic, g_null, scores)


def _summarize(statistic, model, observed, values, n_real, rng_seed):
    kept = np.array([v for v in values if v is not None], dtype=float)
    n_dropped = n_real - len(kept)
    if n_dropped:
        logger.info("statistic=%s model=%s dropped=%d", statistic.name, model, n_dropped)
    p_greater, p_less = _p_values(observed, kept)
    return NullTestResult(
        statistic=statistic.name,
        model=model,
        observed=observed,
        null_values=tuple(kept.tolist()),
        p_greater=p_greater,
        p_less=p_less,
        n_real=n_real,
        n_dropped=n_dropped,
        rng_seed=rng_seed,
    )


@log_usage()
def null_pvalue_weights(
    g: DiffusionGraph,
    statistic: Union[str, Statistic],
    n_real: int = 20,
    rng_seed: int = 0,
    scores: Optional[ScoreVector] = None,
    solver_cfg: Optional[SolverConfig] = None,
    workers: int = 1,
    show_progress: bool = False,
) -> NullTestResult:
    """
    Compare a statistic with its values on graphs of the same topology whose
    edge weights are redrawn uniformly on ``[0, 1]``. Scores are solved
    again on every realization.

    Args:
        g (DiffusionGraph): The observed network.
        statistic (str or Statistic): The statistic, e.g. ``'k_in~I'``.
        n_real (int): Number of realizations. Default to 20
        rng_seed (int): Seed, realization ``k`` uses substream ``k``.
            Default to 0
        scores (ScoreVector): Scores solved on ``g``. Default to solving.
        solver_cfg (SolverConfig): Solver settings. Default to ``None``
        workers (int): Number of processes. Default to 1
        show_progress (bool): Display a progress bar. Default to ``False``

    Returns:
        NullTestResult: The observed value and both one-sided p-values.
    """
    assert n_real >= 2, "n_real must be at least 2"
    statistic = _as_statistic(statistic)
    scores = scores if scores is not None else solve(g, solver_cfg)
    observed = statistic.evaluate(g, scores).value

    values = parallel_map(
        partial(_weights_realization, g=g, statistic=statistic, cfg=solver_cfg),
        np.random.SeedSequence(rng_seed).spawn(n_real),
        workers=workers,
        show_progress=show_progress,
        desc="Weight null model",
    )
    return _summarize(statistic, "weights", observed, values, n_real, rng_seed)


def directed_double_edge_swap(
    src: np.ndarray,
    dst: np.ndarray,
    n_swaps: int,
    rng: np.random.Generator,
    max_tries: Optional[int] = None,
) -> Tuple[np.ndarray, np.ndarray, int]:
    """
    Degree preserving rewiring of a simple digraph.

    A swap picks two edges ``a -> b`` and ``c -> d`` and replaces them by
    ``a -> d`` and ``c -> b``. Swaps creating a self-loop or an existing
    edge are rejected. Edge ``k`` of the output keeps the source of edge
    ``k`` of the input, so edge attributes stay attached to their source.

    Args:
        src (np.ndarray): Sources.
        dst (np.ndarray): Destinations.
        n_swaps (int): Number of accepted swaps to reach.
        rng (np.random.Generator): Random stream.
        max_tries (int): Maximum number of attempts.
            Default to ``100 * n_swaps``

    Returns:
        3-tuple: New sources, new destinations and the number of accepted
        swaps.
    """
    src = np.asarray(src, dtype=np.int64).tolist()
    dst = np.asarray(dst, dtype=np.int64).tolist()
    n_edges = len(src)
    if n_edges < 2:
        raise ValueError("At least two edges are needed to rewire a graph.")
    max_tries = max_tries or 100 * n_swaps

    edges = set(zip(src, dst))
    accepted, tries = 0, 0
    batch = max(1024, 2 * n_swaps)
    while accepted < n_swaps and tries < max_tries:
        pairs = rng.integers(n_edges, size=(batch, 2))
        for e, f in pairs.tolist():
            if accepted == n_swaps or tries == max_tries:
                break
            tries += 1
            a, b, c, d = src[e], dst[e], src[f], dst[f]
            if a == d or c == b or (a, d) in edges or (c, b) in edges:
                continue
            edges -= {(a, b), (c, d)}
            edges |= {(a, d), (c, b)}
            dst[e], dst[f] = d, b
            accepted += 1

    if accepted == 0 and n_swaps > 0:
        raise ValueError("No valid edge swap exists for this graph.")
    if accepted < n_swaps:
        warnings.warn(
            f"Edge swap chain stopped after {accepted} of {n_swaps} swaps "
            f"({tries} tries)."
        )
    return np.array(src, dtype=np.int64), np.array(dst, dtype=np.int64), accepted


def rewire(g: DiffusionGraph, rng: np.random.Generator, swaps_per_edge: int = 10):
    """
    Rewired copy of ``g`` with the same in- and out-degree sequences,
    after ``swaps_per_edge * n_edges`` accepted swaps.
    """
    src, dst, _ = directed_double_edge_swap(
        g.src, g.dst, swaps_per_edge * g.n_edges, rng
    )
    out = DiffusionGraph(
        g.node_ids, src, dst, g.omega, raw_count=g.raw_count, items_shared=g.items_shared
    )
    assert np.array_equal(out.k_out, g.k_out) and np.array_equal(out.k_in, g.k_in), (
        "Rewiring changed a degree sequence."
    )
    return out


def _rewire_realization(seed_seq, g, statistic, scores, swaps_per_edge):
    g_null = rewire(g, make_generator(seed_seq), swaps_per_edge)
    return _evaluate_or_none(statistic, g_null, scores)


@log_usage()
def null_pvalue_rewire(
    g: DiffusionGraph,
    statistic: Union[str, Statistic],
    n_real: int = 20,
    rng_seed: int = 0,
    scores: Optional[ScoreVector] = None,
    solver_cfg: Optional[SolverConfig] = None,
    swaps_per_edge: int = 10,
    workers: int = 1,
    show_progress: bool = False,
) -> NullTestResult:
    """
    Compare a statistic with its values on degree preserving rewirings of
    ``g``, the scores being kept fixed. Meant for assortativity statistics.

    Args:
        g (DiffusionGraph): The observed network.
        statistic (str or Statistic): The statistic, e.g. ``'I~S_nn_out'``.
        n_real (int): Number of realizations. Default to 20
        rng_seed (int): Seed, realization ``k`` uses substream ``k``.
            Default to 0
        scores (ScoreVector): Scores solved on ``g``. Default to solving.
        solver_cfg (SolverConfig): Solver settings, used when ``scores`` is
            not given. Default to ``None``
        swaps_per_edge (int): Accepted swaps per edge. Default to 10
        workers (int): Number of processes. Default to 1
        show_progress (bool): Display a progress bar. Default to ``False``

    Returns:
        NullTestResult: The observed value and both one-sided p-values.
    """
    assert n_real >= 2, "n_real must be at least 2"
    if g.n_edges < 2:
        raise ValueError("At least two edges are needed to rewire a graph.")
    statistic = _as_statistic(statistic)
    scores = scores if scores is not None else solve(g, solver_cfg)
    observed = statistic.evaluate(g, scores).value

    values = parallel_map(
        partial(
            _rewire_realization,
            g=g,
            statistic=statistic,
            scores=scores,
            swaps_per_edge=swaps_per_edge,
        ),
        np.random.SeedSequence(rng_seed).spawn(n_real),
        workers=workers,
        show_progress=show_progress,
        desc="Rewiring null model",
    )
    return _summarize(statistic, "rewire", observed, values, n_real, rng_seed)
