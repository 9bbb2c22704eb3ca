import logging
import numpy as np

from typing import List, Optional

from contagion.graph import DiffusionGraph
from contagion.solver import ScoreVector
from contagion.stats import METHODS, EvalReport, correlation
from contagion.utils.log import log_usage

from .base import EdgeScoreMap, Pairs
from .is_predictor import predict_is
from .similarity import SIMILARITIES, similarity
from .single import SINGLE_PROPERTIES, predict_single


logger = logging.getLogger(__name__)


@log_usage()
def evaluate_prediction(
    pred: EdgeScoreMap,
    g_test: DiffusionGraph,
    method: str = "pearson",
) -> EvalReport:
    """
    Correlate predictions with the contagion rates realized in a test
    network. Pairs that are not edges of ``g_test`` realize a rate of 0.

    Both Pearson and Spearman correlations are reported; ``method`` names
    the headline one, stored in the metadata with the number of edges.

    Args:
        pred (EdgeScoreMap): Predictions, on the node mapping of ``g_test``.
        g_test (DiffusionGraph): Test network.
        method (str): Headline correlation. Default to ``'pearson'``

    Returns:
        EvalReport: Entries ``pearson`` and ``spearman``.
    """
    assert method in METHODS, f"method must be one of {METHODS}, got {method}"
    if len(pred) < 3:
        raise ValueError(f"At least 3 edges are needed, got {len(pred)}.")
    assert max(pred.src.max(), pred.dst.max()) < g_test.n_nodes, (
        "Predictions and test network do not share their nodes."
    )

    realized = g_test.lookup(pred.src, pred.dst)
    report = EvalReport(
        f"prediction:{pred.name}",
        metadata={"predictor": pred.name, "method": method, "n_edges": len(pred)},
    )
    for m in METHODS:
        value, n, degenerate = correlation(pred.scores, realized, method=m)
        report.add(m, value, n=n, degenerate=degenerate, predictor=pred.name)
    return report


def all_predictions(
    g_train: DiffusionGraph,
    scores: ScoreVector,
    pairs: Pairs = None,
    direction: str = "in",
) -> List[EdgeScoreMap]:
    """IS predictions followed by the single-property and similarity baselines."""
    return (
        [predict_is(g_train, scores, pairs)]
        + [predict_single(k, g_train, scores, pairs) for k in SINGLE_PROPERTIES]
        + [similarity(k, g_train, direction, pairs) for k in SIMILARITIES]
    )


@log_usage()
def compare_predictors(
    g_train: DiffusionGraph,
    g_test: DiffusionGraph,
    scores: ScoreVector,
    pairs: Pairs = None,
    direction: str = "in",
    **tags,
) -> EvalReport:
    """
    Evaluate every predictor on the same pairs, one entry per predictor and
    correlation method, tagged with ``predictor`` and ``tags``.
    """
    report = EvalReport("predictor_comparison", metadata={"direction": direction})
    for pred in all_predictions(g_train, scores, pairs, direction):
        report.extend(evaluate_prediction(pred, g_test), **tags)
    return report


def best_predictor(report: EvalReport, method: str = "pearson") -> Optional[str]:
    """Name of the predictor with the highest correlation in a comparison."""
    entries = [e for e in report.entries if e.statistic == method]
    if not entries:
        return None
    return entries[int(np.argmax([e.value for e in entries]))].tags["predictor"]
