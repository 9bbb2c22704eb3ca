import logging
import numpy as np
import scipy.stats
import warnings

from typing import Optional, Sequence

from contagion.cascades import CascadeStore
from contagion.graph import DiffusionGraph, build_graph
from contagion.sim import GroundTruth, remove_events
from contagion.solver import ScoreVector, SolverConfig, solve
from contagion.utils.log import log_usage

from .correlation import correlation
from .neighbors import neighbor_average
from .null_models import null_pvalue_rewire, null_pvalue_weights
from .report import EvalReport
from .statistic import ASSORTATIVITY_STATISTICS, NODE_STATISTICS, Statistic


logger = logging.getLogger(__name__)


def _add_correlation(report, name, x, y, method="pearson", nonzero_only=True, **tags):
    try:
        value, n, degenerate = correlation(x, y, method=method, nonzero_only=nonzero_only)
    except ValueError as e:
        logger.info("statistic=%s undefined: %s", name, e)
        return None
    return report.add(name, value, n=n, degenerate=degenerate, **tags)


def _top(values: np.ndarray, quantile: float) -> np.ndarray:
    # Nodes of nonzero value at or above the top-quantile cutoff
    positive = values > 0
    if not positive.any():
        return positive
    cutoff = np.quantile(values[positive], 1 - quantile)
    return positive & (values >= cutoff)


def _bottom(values: np.ndarray, quantile: float) -> np.ndarray:
    positive = values > 0
    if not positive.any():
        return positive
    cutoff = np.quantile(values[positive], quantile)
    return positive & (values <= cutoff)


@log_usage()
def stylized_facts(
    scores: ScoreVector, g: DiffusionGraph, quantile: float = 0.2
) -> EvalReport:
    """
    Statistics checking the qualitative patterns of solved scores.

    * ``joint_top_fraction``: fraction of the scored nodes in the top
      ``quantile`` of both influence and susceptibility, with ``I~S`` the
      Pearson correlation of the two scores.
    * ``ks_S_nn_out``: two sample Kolmogorov-Smirnov statistic between the
      mean out-neighbour susceptibility of the top and of the bottom
      influencers.
    * ``n_high_influence`` and ``n_high_susceptibility``: number of nodes
      above the top ``quantile`` cutoff of the pooled nonzero scores. The
      cutoff depends on the scale set by the solver's initial value.
    * ``neighbor_influence_ratio``: mean influence of the out-neighbours of
      the top influencers over the mean influence of all nodes.

    Args:
        scores (ScoreVector): Solved scores.
        g (DiffusionGraph): The network the scores were solved on.
        quantile (float): Size of the top and bottom groups. Default to 0.2

    Returns:
        EvalReport: The statistics.
    """
    assert 0 < quantile < 0.5, "quantile must be within (0, 0.5)"
    assert scores.n_nodes == g.n_nodes, "Scores and graph are not aligned."
    I, S = scores.I_hat, scores.S_hat
    scored = (I > 0) | (S > 0)
    if scored.sum() < 10:
        raise ValueError(f"At least 10 scored nodes are needed, got {scored.sum()}.")

    report = EvalReport("stylized_facts", metadata={"quantile": quantile})
    top_i, top_s = _top(I, quantile), _top(S, quantile)

    report.add(
        "joint_top_fraction", (top_i & top_s).sum() / scored.sum(), n=int(scored.sum())
    )
    _add_correlation(report, "I~S", I, S)

    s_nn_out, has_out = neighbor_average(g, S, "out")
    high = s_nn_out[top_i & has_out]
    low = s_nn_out[_bottom(I, quantile) & has_out]
    if len(high) and len(low):
        ks = scipy.stats.ks_2samp(high, low)
        report.add(
            "ks_S_nn_out",
            ks.statistic,
            n=len(high) + len(low),
            p_value=float(ks.pvalue),
        )

    pooled = np.concatenate([I[I > 0], S[S > 0]])
    cutoff = np.quantile(pooled, 1 - quantile)
    report.add("n_high_influence", int((I >= cutoff).sum()), n=len(pooled))
    report.add("n_high_susceptibility", int((S >= cutoff).sum()), n=len(pooled))

    i_nn_out, has_out = neighbor_average(g, I, "out")
    hubs = top_i & has_out
    if hubs.any() and I.mean() > 0:
        report.add(
            "neighbor_influence_ratio",
            i_nn_out[hubs].mean() / I.mean(),
            n=int(hubs.sum()),
        )
    return report


@log_usage()
def reconstruction_report(
    g: DiffusionGraph,
    scores: ScoreVector,
    truth: GroundTruth,
    topology: Optional[DiffusionGraph] = None,
    **tags,
) -> EvalReport:
    """
    Pearson correlations of the reconstructed scores with the ground truth
    (``I_hat~I``, ``S_hat~S``), with the true contagion rates
    (``I_hat~f``, ``S_hat~g``) and with the total degree in the diffusion
    network (``I_hat~k``, ``S_hat~k``). Pairs with a zero entry are dropped.

    Args:
        g (DiffusionGraph): Diffusion network built from the corpus.
        scores (ScoreVector): Scores solved on ``g``.
        truth (GroundTruth): Planted scores.
        topology (DiffusionGraph): Topology the corpus was simulated on,
            defining the true rates. Default to ``g``
        **tags: Added to every entry.
    """
    topology = topology if topology is not None else g
    f_true, g_true = truth.rates(topology)
    k = (g.k_in + g.k_out).astype(float)

    report = EvalReport("reconstruction")
    for name, x, y in (
        ("I_hat~I", scores.I_hat, truth.I),
        ("I_hat~f", scores.I_hat, f_true),
        ("I_hat~k", scores.I_hat, k),
        ("S_hat~S", scores.S_hat, truth.S),
        ("S_hat~g", scores.S_hat, g_true),
        ("S_hat~k", scores.S_hat, k),
    ):
        _add_correlation(report, name, x, y, **tags)
    return report


@log_usage()
def robustness_sweep(
    store: CascadeStore,
    truth: GroundTruth,
    fractions: Sequence[float] = (0.1, 0.3, 0.5),
    rng_seed: int = 0,
    solver_cfg: Optional[SolverConfig] = None,
    topology: Optional[DiffusionGraph] = None,
) -> EvalReport:
    """
    Reconstruction accuracy after removing growing fractions of the reshare
    events. Every entry is tagged with its ``fraction``.
    """
    report = EvalReport(
        "robustness", metadata={"fractions": list(fractions), "rng_seed": rng_seed}
    )
    for k, fraction in enumerate(fractions):
        degraded = remove_events(store, fraction, rng_seed + k)
        g = build_graph(degraded)
        scores = solve(g, solver_cfg)
        report.extend(
            reconstruction_report(g, scores, truth, topology=topology),
            fraction=fraction,
        )
    return report


@log_usage()
def period_table(
    periods: Sequence[CascadeStore],
    statistics: Optional[Sequence[str]] = None,
    method: str = "spearman",
    n_real: int = 0,
    rng_seed: int = 0,
    solver_cfg: Optional[SolverConfig] = None,
    workers: int = 1,
) -> EvalReport:
    """
    Node-level and assortativity correlations of every period.

    Each period gets its own diffusion network and scores. With
    ``n_real >= 2``, every value also gets a null-model p-value: weight
    randomization for node-level statistics, rewiring with scores held
    fixed for assortativity statistics.

    Args:
        periods (sequence): One store per period.
        statistics (sequence): Statistic names. Default to the node-level
            and assortativity statistics.
        method (str): Correlation method. Default to ``'spearman'``
        n_real (int): Null realizations per value, 0 for none. Default to 0
        rng_seed (int): Seed of the null models. Default to 0
        solver_cfg (SolverConfig): Solver settings. Default to ``None``
        workers (int): Number of processes. Default to 1

    Returns:
        EvalReport: One entry per period and statistic, tagged with
        ``period`` and, with null models, ``significant``.
    """
    names = list(statistics or NODE_STATISTICS + ASSORTATIVITY_STATISTICS)
    report = EvalReport(
        "period_table",
        metadata={"method": method, "n_real": n_real, "rng_seed": rng_seed},
    )

    for k, store in enumerate(periods):
        if store.n_events == 0:
            warnings.warn(f"Period {k} is empty and is skipped.")
            continue
        g = build_graph(store)
        scores = solve(g, solver_cfg)
        for name in names:
            statistic = Statistic.parse(name, method=method)
            try:
                value, n, degenerate = statistic.evaluate(g, scores)
            except ValueError as e:
                logger.info("period=%d statistic=%s undefined: %s", k, name, e)
                continue

            if n_real < 2:
                report.add(name, value, n=n, degenerate=degenerate, period=k)
                continue

            test = null_pvalue_rewire if statistic.is_assortativity else null_pvalue_weights
            try:
                result = test(
                    g,
                    statistic,
                    n_real=n_real,
                    rng_seed=rng_seed,
                    scores=scores,
                    solver_cfg=solver_cfg,
                    workers=workers,
                )
            except ValueError as e:
                logger.info("period=%d statistic=%s no null value: %s", k, name, e)
                report.add(name, value, n=n, degenerate=degenerate, period=k)
                continue
            report.add(
                name,
                value,
                n=n,
                p_value=result.p_value,
                degenerate=degenerate,
                period=k,
                significant=result.significant,
            )
    return report
