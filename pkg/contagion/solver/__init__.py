from .is_solver import (
    ScoreVector,
    SolverConfig,
    iterate_once,
    predicted_rate,
    predicted_rates,
    rescale,
    solve,
    write_scores,
)
from .spectral import gauge_vectors, jacobian, jacobian_spectral_radius

__all__ = [
    "ScoreVector",
    "SolverConfig",
    "gauge_vectors",
    "iterate_once",
    "jacobian",
    "jacobian_spectral_radius",
    "predicted_rate",
    "predicted_rates",
    "rescale",
    "solve",
    "write_scores",
]
