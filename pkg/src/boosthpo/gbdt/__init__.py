"""Histogram-based gradient boosted decision trees with gbdt/goss modes."""

from .binning import BinnedMatrix, bin_matrix, build_bins
from .goss import goss_sample
from .gradients import compute_gradients, sigmoid, softmax
from .params import (
    BINARY_LOGISTIC,
    GBDT,
    GOSS,
    MIN_CHILD_HESSIAN,
    MULTICLASS_SOFTMAX,
    ONE_VS_ALL,
    HyperParams,
)
from .tree import Tree, grow_tree, split_gain
from .training import Ensemble, margins_to_probs, predict_proba, train

__all__ = [
    "BinnedMatrix",
    "bin_matrix",
    "build_bins",
    "goss_sample",
    "compute_gradients",
    "sigmoid",
    "softmax",
    "BINARY_LOGISTIC",
    "GBDT",
    "GOSS",
    "MIN_CHILD_HESSIAN",
    "MULTICLASS_SOFTMAX",
    "ONE_VS_ALL",
    "HyperParams",
    "Tree",
    "grow_tree",
    "split_gain",
    "Ensemble",
    "margins_to_probs",
    "predict_proba",
    "train",
]
