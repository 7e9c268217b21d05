"""Experiment configuration: one JSON document plus named presets for the
grid profiles and HPO search spaces."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

from .bayesopt import Categorical, Continuous, Integer, ParamSpace
from .datasets import LabeledDataset, Task, load_svmlight, make_synthetic
from .errors import BoostHpoError
from .gbdt import BINARY_LOGISTIC, MULTICLASS_SOFTMAX, ONE_VS_ALL, HyperParams
from .orchestrator import Grid

__all__ = ["ConfigError", "ExperimentConfig", "PRESETS", "hpo_space_preset"]


class ConfigError(BoostHpoError):
    """Bad configuration document or flags (exit code 2)."""


def _hpo_dimensions(feature_fraction: bool, boosting: bool) -> tuple:
    dims: list = [
        Integer("iterations", 16, 1000),
        Integer("depth", 2, 14),
        Continuous("regularizer", 1e-2, 1e5, scale="log10"),
        Continuous("learning_rate", 0.01, 1.0),
    ]
    if feature_fraction:
        dims.append(Continuous("feature_fraction", 0.01, 1.0))
    if boosting:
        dims.append(Categorical("boosting", ("gbdt", "goss")))
    return tuple(dims)


def hpo_space_preset(name: str) -> ParamSpace:
    if name == "xgb-hpo":
        return ParamSpace(_hpo_dimensions(feature_fraction=True, boosting=False))
    if name == "lgbm-hpo":
        return ParamSpace(_hpo_dimensions(feature_fraction=True, boosting=True))
    if name == "cat-hpo":
        return ParamSpace(_hpo_dimensions(feature_fraction=False, boosting=False))
    raise ConfigError(f"unknown HPO preset {name!r}")


PRESETS = {
    "xgb-grid": ("grid", "xgb-like"),
    "lgbm-grid": ("grid", "lgbm-like"),
    "cat-grid": ("grid", "cat-like"),
    "xgb-hpo": ("space", "xgb-hpo"),
    "lgbm-hpo": ("space", "lgbm-hpo"),
    "cat-hpo": ("space", "cat-hpo"),
}


def _parse_task(obj) -> Task:
    if obj in ("binary", None):
        return Task.binary()
    if isinstance(obj, str) and obj.startswith("multiclass:"):
        return Task.multiclass(int(obj.split(":", 1)[1]))
    if isinstance(obj, dict) and "multiclass" in obj:
        return Task.multiclass(int(obj["multiclass"]))
    raise ConfigError(f"cannot parse task {obj!r}")


@dataclass
class ExperimentConfig:
    """Parsed experiment document; flags may override a few fields."""

    raw: dict[str, Any] = field(default_factory=dict)
    seed: int = 0
    workers: int = 1
    slots_per_host: int = 2
    budget: int = 150
    init_count: int = 8
    split_fraction: float = 0.25
    split_seed: int = 0
    out_dir: str = "."
    grid_profile: str | None = None
    custom_grid: Grid | None = None
    space: ParamSpace | None = None

    @classmethod
    def from_dict(cls, doc: dict[str, Any], overrides: dict[str, Any] | None = None) -> "ExperimentConfig":
        if not isinstance(doc, dict):
            raise ConfigError("config document must be a JSON object")
        overrides = {k: v for k, v in (overrides or {}).items() if v is not None}
        merged = dict(doc)
        merged.update(overrides)

        cfg = cls(raw=merged)
        cfg.seed = int(merged.get("seed", 0))
        cfg.workers = int(merged.get("workers", 1))
        cfg.slots_per_host = int(merged.get("slots_per_host", 2))
        cfg.budget = int(merged.get("budget", 150))
        cfg.init_count = int(merged.get("init_count", 8))
        cfg.out_dir = str(merged.get("out_dir", "."))
        split = merged.get("split", {})
        cfg.split_fraction = float(split.get("fraction", 0.25))
        cfg.split_seed = int(split.get("seed", cfg.seed))

        search = dict(merged.get("search", {}))
        if "preset" in merged:
            search = {"preset": merged["preset"]}
        keys = [k for k in ("preset", "grid", "space") if k in search]
        if len(keys) > 1:
            raise ConfigError("exactly one of preset/grid/space may be set")
        if keys:
            kind = keys[0]
            if kind == "preset":
                name = search["preset"]
                if name not in PRESETS:
                    raise ConfigError(f"unknown preset {name!r}; known: {sorted(PRESETS)}")
                target, value = PRESETS[name]
                if target == "grid":
                    cfg.grid_profile = value
                else:
                    cfg.space = hpo_space_preset(value)
            elif kind == "grid":
                spec = search["grid"]
                if isinstance(spec, str):
                    cfg.grid_profile = spec
                else:
                    cfg.custom_grid = Grid(
                        axes=tuple((name, tuple(values)) for name, values in spec.items())
                    )
            else:
                try:
                    cfg.space = ParamSpace.from_json_obj(search["space"])
                except (KeyError, TypeError, ValueError) as exc:
                    raise ConfigError(f"bad space definition: {exc}")
        return cfg

    @classmethod
    def from_file(cls, path: str, overrides: dict[str, Any] | None = None) -> "ExperimentConfig":
        try:
            with open(path) as fh:
                doc = json.load(fh)
        except FileNotFoundError:
            raise ConfigError(f"config file not found: {path}")
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}")
        return cls.from_dict(doc, overrides)

    # --- data ---------------------------------------------------------

    def _load_spec(self, spec: dict[str, Any]) -> LabeledDataset:
        if "synthetic" in spec:
            syn = spec["synthetic"]
            return make_synthetic(
                n=int(syn["n"]),
                m=int(syn["m"]),
                task=_parse_task(syn.get("task")),
                separation=float(syn.get("separation", 1.0)),
                seed=int(syn.get("seed", self.seed)),
            )
        if "path" in spec:
            task = _parse_task(spec["task"]) if "task" in spec else None
            n_features = spec.get("n_features")
            return load_svmlight(
                spec["path"], task=task, n_features=None if n_features is None else int(n_features)
            )
        raise ConfigError("dataset spec needs either 'synthetic' or 'path'")

    def load_dataset(self) -> LabeledDataset:
        if "dataset" not in self.raw:
            raise ConfigError("config has no 'dataset' entry")
        return self._load_spec(self.raw["dataset"])

    def load_test_dataset(self) -> LabeledDataset | None:
        if "test" in self.raw:
            return self._load_spec(self.raw["test"])
        return None

    # --- model configuration -------------------------------------------

    def objective_for(self, task: Task) -> str:
        if task.kind == "binary":
            return BINARY_LOGISTIC
        name = self.raw.get("objective", "multiclass_softmax")
        if name not in (MULTICLASS_SOFTMAX, ONE_VS_ALL):
            raise ConfigError(f"unknown objective {name!r}")
        return name

    def hyperparams(self, task: Task) -> HyperParams:
        spec = dict(self.raw.get("hyperparams", {}))
        known = {
            "iterations": "iterations",
            "depth": "max_depth",
            "regularizer": "reg_lambda",
            "learning_rate": "learning_rate",
            "feature_fraction": "feature_fraction",
            "boosting": "boosting",
            "top_rate": "top_rate",
            "other_rate": "other_rate",
            "num_bins": "num_bins",
        }
        kwargs: dict[str, Any] = {}
        for key, value in spec.items():
            if key not in known:
                raise ConfigError(f"unknown hyper-parameter {key!r}")
            kwargs[known[key]] = value
        try:
            return HyperParams(
                objective=self.objective_for(task),
                num_classes=task.num_classes,
                seed=self.seed,
                **kwargs,
            )
        except (ValueError, BoostHpoError) as exc:
            raise ConfigError(f"bad hyper-parameters: {exc}")

    def grid(self) -> Grid:
        if self.custom_grid is not None:
            return self.custom_grid
        if self.grid_profile is not None:
            return Grid.for_profile(self.grid_profile)
        raise ConfigError("this run needs a grid profile (preset or custom grid axes)")

    def param_space(self) -> ParamSpace:
        if self.space is None:
            raise ConfigError("this run needs a parameter space (preset or 'space')")
        return self.space
