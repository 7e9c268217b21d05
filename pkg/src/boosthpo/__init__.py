"""boosthpo: histogram-based gradient boosted trees plus the search harness
(parallel grid search with file-lock slot assignment, and GP/EI Bayesian
hyper-parameter optimization) and ranking/classification metrics."""

from . import bayesopt, datasets, gbdt, metrics, orchestrator
from .datasets import LabeledDataset, Task, load_svmlight, make_synthetic, stratified_split
from .gbdt import Ensemble, HyperParams, train
from .trials import TrialRecord

__version__ = "0.1.0"

__all__ = [
    "bayesopt",
    "datasets",
    "gbdt",
    "metrics",
    "orchestrator",
    "LabeledDataset",
    "Task",
    "load_svmlight",
    "make_synthetic",
    "stratified_split",
    "Ensemble",
    "HyperParams",
    "train",
    "TrialRecord",
    "__version__",
]
