from .base import EdgeScoreMap, resolve_pairs
from .evaluate import (
    all_predictions,
    best_predictor,
    compare_predictors,
    evaluate_prediction,
)
from .is_predictor import predict_is
from .similarity import SIMILARITIES, similarity
from .single import SINGLE_PROPERTIES, predict_single

__all__ = [
    "EdgeScoreMap",
    "SIMILARITIES",
    "SINGLE_PROPERTIES",
    "all_predictions",
    "best_predictor",
    "compare_predictors",
    "evaluate_prediction",
    "predict_is",
    "predict_single",
    "resolve_pairs",
    "similarity",
]
