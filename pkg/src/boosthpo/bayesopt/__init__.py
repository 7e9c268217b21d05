"""Bayesian hyper-parameter optimization: Matern 5/2 GP surrogate with
expected-improvement acquisition over mixed parameter spaces."""

from ..trials import TrialRecord
from .acquisition import expected_improvement, suggest_next
from .gp import GaussianProcessState, fit_gp, gp_posterior, matern52, matern52_matrix
from .loop import run_hpo
from .space import Categorical, Continuous, Integer, ParamSpace

__all__ = [
    "TrialRecord",
    "expected_improvement",
    "suggest_next",
    "GaussianProcessState",
    "fit_gp",
    "gp_posterior",
    "matern52",
    "matern52_matrix",
    "run_hpo",
    "Categorical",
    "Continuous",
    "Integer",
    "ParamSpace",
]
