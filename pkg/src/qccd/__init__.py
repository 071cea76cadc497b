"""Bivariate causal discovery by comparing copula-based conditional quantile scores."""

from .copula import CopulaModel, fit
from .decision import CausalDecision, Direction, decide
from .pairs import Pair
from .scoring import aggregate_score, directional_scores, fit_pair, gauss_legendre, quantile_loss

__all__ = [
    "CausalDecision",
    "CopulaModel",
    "Direction",
    "Pair",
    "aggregate_score",
    "decide",
    "directional_scores",
    "fit",
    "fit_pair",
    "gauss_legendre",
    "quantile_loss",
]
__version__ = "0.1.0"
