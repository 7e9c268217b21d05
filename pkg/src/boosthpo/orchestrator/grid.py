"""Cartesian hyper-parameter grids for the three framework-style profiles."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Any

from ..gbdt import BINARY_LOGISTIC, HyperParams

__all__ = ["Grid", "enumerate_grid", "GRID_PROFILES"]

_ITERATIONS = (40, 80, 160, 320, 480)
_DEPTHS = (4, 8, 10, 12)
_REGULARIZERS = (0.0, 1.0, 100.0)
_LEARNING_RATES = (0.1, 0.3)
_FEATURE_FRACTIONS = (0.8, 1.0)
_BOOSTING = ("gbdt", "goss")

GRID_PROFILES = ("xgb-like", "lgbm-like", "cat-like")


@dataclass(frozen=True)
class Grid:
    """Ordered axes; enumeration is row-major (last axis varies fastest)."""

    axes: tuple  # ((name, (values...)), ...)
    profile: str = "custom"

    def __post_init__(self):
        object.__setattr__(
            self, "axes", tuple((name, tuple(values)) for name, values in self.axes)
        )

    @property
    def names(self) -> list[str]:
        return [name for name, _ in self.axes]

    @property
    def size(self) -> int:
        out = 1
        for _, values in self.axes:
            out *= len(values)
        return out

    def assignments(self) -> list[dict[str, Any]]:
        names = self.names
        return [
            dict(zip(names, combo))
            for combo in itertools.product(*(values for _, values in self.axes))
        ]

    @classmethod
    def for_profile(cls, profile: str) -> "Grid":
        axes: list[tuple[str, tuple]] = [
            ("iterations", _ITERATIONS),
            ("depth", _DEPTHS),
            ("regularizer", _REGULARIZERS),
            ("learning_rate", _LEARNING_RATES),
        ]
        if profile in ("xgb-like", "lgbm-like"):
            axes.append(("feature_fraction", _FEATURE_FRACTIONS))
        if profile == "lgbm-like":
            axes.append(("boosting", _BOOSTING))
        if profile not in GRID_PROFILES:
            raise ValueError(f"unknown grid profile {profile!r}; expected one of {GRID_PROFILES}")
        return cls(axes=tuple(axes), profile=profile)


def assignment_to_hyperparams(
    assignment: dict[str, Any],
    objective: str = BINARY_LOGISTIC,
    num_classes: int = 2,
    num_bins: int = 256,
    seed: int = 0,
) -> HyperParams:
    """Turn a grid/space assignment into a full training configuration."""
    return HyperParams(
        iterations=int(assignment["iterations"]),
        max_depth=int(assignment["depth"]),
        reg_lambda=float(assignment["regularizer"]),
        learning_rate=float(assignment["learning_rate"]),
        feature_fraction=float(assignment.get("feature_fraction", 1.0)),
        boosting=str(assignment.get("boosting", "gbdt")),
        objective=objective,
        num_classes=num_classes,
        num_bins=num_bins,
        seed=seed,
    )


def enumerate_grid(
    profile: str,
    objective: str = BINARY_LOGISTIC,
    num_classes: int = 2,
    num_bins: int = 256,
    seed: int = 0,
) -> list[HyperParams]:
    """Full Cartesian product of a profile in deterministic row-major order."""
    grid = Grid.for_profile(profile)
    return [
        assignment_to_hyperparams(a, objective, num_classes, num_bins, seed)
        for a in grid.assignments()
    ]
