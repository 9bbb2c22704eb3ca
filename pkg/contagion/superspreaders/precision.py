import logging
import numpy as np
import pandas as pd

from typing import Sequence

from contagion.cascades import CascadeStore
from contagion.graph import DiffusionGraph
from contagion.solver import ScoreVector
from contagion.stats import Correlation, EvalReport, correlation
from contagion.utils.common import ceil_fraction
from contagion.utils.log import log_usage

from .base import SeedRanking
from .seed_metrics import METRICS, seed_score
from .sizes import realized_sizes


logger = logging.getLogger(__name__)


def _domain(ranking: SeedRanking, sizes: pd.Series) -> np.ndarray:
    index = sizes.index.to_numpy(dtype=np.int64)
    domain = index[(index >= 0) & (index < ranking.n_nodes)]
    if len(domain) == 0:
        raise ValueError("No node is both ranked and a seed of a test cascade.")
    return np.sort(domain)


@log_usage()
def precision_at(ranking: SeedRanking, sizes: pd.Series, fraction: float = 0.1) -> float:
    """
    Overlap between the top ``fraction`` of the nodes by metric and by
    realized size, among the nodes present in both.

    The top sets have ``ceil(fraction * n)`` nodes; ties are broken by node
    index in both rankings.

    Args:
        ranking (SeedRanking): Metric ranking.
        sizes (pd.Series): Realized size by node index.
        fraction (float): Size of the top sets, in (0, 1]. Default to 0.1

    Returns:
        float: Fraction of the top metric nodes that are top size nodes.
    """
    assert 0 < fraction <= 1, "fraction must be within (0, 1]"
    domain = _domain(ranking, sizes)
    k = ceil_fraction(fraction, len(domain))

    by_metric = ranking.top(k, domain)
    values = sizes.loc[domain].to_numpy(dtype=float)
    by_size = domain[np.lexsort((domain, -values))][:k]
    return len(np.intersect1d(by_metric, by_size)) / k


def rank_correlation(ranking: SeedRanking, sizes: pd.Series) -> Correlation:
    """Spearman correlation between metric and realized size over seeds."""
    domain = _domain(ranking, sizes)
    return correlation(
        ranking.scores[domain], sizes.loc[domain].to_numpy(dtype=float), "spearman"
    )


@log_usage()
def evaluate_superspreaders(
    g_train: DiffusionGraph,
    scores: ScoreVector,
    test: CascadeStore,
    fractions: Sequence[float] = (0.1, 0.05),
    aggregate: str = "mean",
) -> EvalReport:
    """
    Precision of every seed metric at every fraction, and its Spearman
    correlation with the realized sizes. Entries are named ``precision``
    and ``spearman`` and tagged with ``metric`` (and ``fraction``).
    """
    sizes = realized_sizes(test, aggregate=aggregate)
    report = EvalReport(
        "superspreaders",
        metadata={"aggregate": aggregate, "n_seeds": len(sizes)},
    )
    for metric in METRICS:
        ranking = seed_score(metric, g_train, scores)
        n_seeds = len(_domain(ranking, sizes))
        for fraction in fractions:
            report.add(
                "precision",
                precision_at(ranking, sizes, fraction),
                n=n_seeds,
                metric=metric,
                fraction=fraction,
            )
        try:
            value, n, degenerate = rank_correlation(ranking, sizes)
            report.add("spearman", value, n=n, degenerate=degenerate, metric=metric)
        except ValueError as e:
            logger.info("metric=%s spearman undefined: %s", metric, e)
    return report


def seed_table(
    g_train: DiffusionGraph,
    scores: ScoreVector,
    test: CascadeStore,
    aggregate: str = "mean",
) -> pd.DataFrame:
    """Per-seed table: node id, the six metric scores and realized size."""
    sizes = realized_sizes(test, aggregate=aggregate)
    table = pd.DataFrame({"node_id": g_train.node_ids})
    for metric in METRICS:
        table[metric] = seed_score(metric, g_train, scores).scores
    table["realized_size"] = sizes.reindex(np.arange(g_train.n_nodes)).to_numpy()
    return table.loc[sizes.index[sizes.index < g_train.n_nodes]].reset_index(drop=True)
