from .correlation import METHODS, Correlation, correlation
from .neighbors import BASE_PROPERTIES, neighbor_average, node_property
from .null_models import (
    NullTestResult,
    directed_double_edge_swap,
    null_pvalue_rewire,
    null_pvalue_weights,
    rewire,
)
from .report import Entry, EvalReport
from .statistic import (
    ASSORTATIVITY_STATISTICS,
    NODE_STATISTICS,
    Statistic,
    evaluate_statistic,
)
from .stylized import (
    period_table,
    reconstruction_report,
    robustness_sweep,
    stylized_facts,
)

__all__ = [
    "ASSORTATIVITY_STATISTICS",
    "BASE_PROPERTIES",
    "Correlation",
    "Entry",
    "EvalReport",
    "METHODS",
    "NODE_STATISTICS",
    "NullTestResult",
    "Statistic",
    "correlation",
    "directed_double_edge_swap",
    "evaluate_statistic",
    "neighbor_average",
    "node_property",
    "null_pvalue_rewire",
    "null_pvalue_weights",
    "period_table",
    "reconstruction_report",
    "rewire",
    "robustness_sweep",
    "stylized_facts",
]
