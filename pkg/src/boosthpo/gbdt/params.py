"""Training hyper-parameters for the boosted-tree learner."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Any

from ..errors import BadRates

GBDT = "gbdt"
GOSS = "goss"

BINARY_LOGISTIC = "binary_logistic"
MULTICLASS_SOFTMAX = "multiclass_softmax"
ONE_VS_ALL = "one_vs_all"

_OBJECTIVES = (BINARY_LOGISTIC, MULTICLASS_SOFTMAX, ONE_VS_ALL)

# Guards division by ~0 hessian sums when the regularizer is 0.
MIN_CHILD_HESSIAN = 1e-3


@dataclass(frozen=True)
class HyperParams:
    """One boosted-tree configuration.

    ``boosting`` is "gbdt" or "goss"; goss keeps the ``top_rate`` largest
    gradients and resamples a ``other_rate`` share of the rest.  ``reg_lambda``
    is the L2 penalty on leaf values.
    """

    iterations: int = 100
    max_depth: int = 6
    reg_lambda: float = 1.0
    learning_rate: float = 0.1
    feature_fraction: float = 1.0
    boosting: str = GBDT
    top_rate: float = 0.2
    other_rate: float = 0.1
    num_bins: int = 256
    objective: str = BINARY_LOGISTIC
    num_classes: int = 2
    seed: int = 0

    def __post_init__(self):
        if self.iterations < 0:
            raise ValueError("iterations must be >= 0")
        if not (0 <= self.max_depth <= 32):
            raise ValueError("max_depth must lie in [0, 32]")
        if self.reg_lambda < 0:
            raise ValueError("reg_lambda must be >= 0")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be > 0")
        if not (0 < self.feature_fraction <= 1):
            raise ValueError("feature_fraction must lie in (0, 1]")
        if not (2 <= self.num_bins <= 65535):
            raise ValueError("num_bins must lie in [2, 65535]")
        if self.boosting not in (GBDT, GOSS):
            raise ValueError(f"unknown boosting mode {self.boosting!r}")
        if self.boosting == GOSS:
            # top_rate == 1 keeps every row; other_rate is then irrelevant.
            bad = (
                self.top_rate < 0
                or self.top_rate > 1
                or self.other_rate <= 0
                or (self.top_rate < 1 and self.top_rate + self.other_rate > 1)
            )
            if bad:
                raise BadRates(
                    f"goss rates need a in [0, 1], b > 0, a + b <= 1; got a={self.top_rate}, b={self.other_rate}"
                )
        if self.objective not in _OBJECTIVES:
            raise ValueError(f"unknown objective {self.objective!r}")
        if self.objective == BINARY_LOGISTIC and self.num_classes != 2:
            raise ValueError("binary objective implies exactly 2 classes")
        if self.num_classes < 2:
            raise ValueError("num_classes must be >= 2")

    @property
    def n_tree_groups(self) -> int:
        """Trees grown per iteration: 1 for binary, C otherwise."""
        return 1 if self.objective == BINARY_LOGISTIC else self.num_classes

    def with_seed(self, seed: int) -> "HyperParams":
        return replace(self, seed=seed)

    def to_dict(self) -> dict[str, Any]:
        return {
            "iterations": self.iterations,
            "max_depth": self.max_depth,
            "reg_lambda": self.reg_lambda,
            "learning_rate": self.learning_rate,
            "feature_fraction": self.feature_fraction,
            "boosting": self.boosting,
            "top_rate": self.top_rate,
            "other_rate": self.other_rate,
            "num_bins": self.num_bins,
            "objective": self.objective,
            "num_classes": self.num_classes,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "HyperParams":
        return cls(**d)
