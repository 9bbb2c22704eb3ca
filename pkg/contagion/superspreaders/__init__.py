from .base import SeedRanking
from .precision import (
    evaluate_superspreaders,
    precision_at,
    rank_correlation,
    seed_table,
)
from .seed_metrics import METRICS, seed_score
from .sizes import realized_sizes

__all__ = [
    "METRICS",
    "SeedRanking",
    "evaluate_superspreaders",
    "precision_at",
    "rank_correlation",
    "realized_sizes",
    "seed_score",
    "seed_table",
]
