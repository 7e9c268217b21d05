"""Boosting loop, trained-model container, prediction and JSON persistence."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.sparse as sp

from ..datasets import LabeledDataset
from ..errors import NonFiniteFeature, ObjectiveMismatch
from .binning import BinnedMatrix, bin_matrix, build_bins
from .goss import goss_sample
from .gradients import compute_gradients, sigmoid, softmax
from .params import BINARY_LOGISTIC, GOSS, ONE_VS_ALL, HyperParams
from .tree import Tree, grow_tree

__all__ = ["Ensemble", "train", "predict_proba"]

_MODEL_FORMAT = "boosthpo-ensemble"
_MODEL_VERSION = 1

MetricFn = Callable[[LabeledDataset, np.ndarray], float]


@dataclass
class Ensemble:
    """Trained additive model: one ordered tree list per class group."""

    objective: str
    num_classes: int
    base_margin: np.ndarray  # (n_groups,)
    trees_per_class: list[list[Tree]]
    boundaries: list[np.ndarray]
    n_features: int

    @property
    def n_iterations(self) -> int:
        return len(self.trees_per_class[0]) if self.trees_per_class else 0

    def _margins_for_codes(self, codes: np.ndarray) -> np.ndarray:
        n = codes.shape[0]
        margins = np.tile(self.base_margin, (n, 1))
        for k, trees in enumerate(self.trees_per_class):
            for tree in trees:
                margins[:, k] += tree.predict_codes(codes)
        return margins

    def predict_margins(self, rows) -> np.ndarray:
        raw = _as_dense(rows)
        if not np.all(np.isfinite(raw)):
            raise NonFiniteFeature("feature rows contain nan or inf")
        codes = bin_matrix(raw, self.boundaries)
        return self._margins_for_codes(codes)

    def predict_proba(self, rows) -> np.ndarray:
        return margins_to_probs(self.predict_margins(rows), self.objective)

    # --- persistence --------------------------------------------------

    def to_json(self) -> str:
        doc = {
            "format": _MODEL_FORMAT,
            "version": _MODEL_VERSION,
            "objective": self.objective,
            "num_classes": self.num_classes,
            "n_features": self.n_features,
            "base_margin": [float(v) for v in self.base_margin],
            "boundaries": [[float(v) for v in b] for b in self.boundaries],
            "trees_per_class": [
                [tree.to_nested() for tree in trees] for trees in self.trees_per_class
            ],
        }
        return json.dumps(doc)

    @classmethod
    def from_json(cls, text: str) -> "Ensemble":
        doc = json.loads(text)
        if doc.get("format") != _MODEL_FORMAT:
            raise ValueError("not an ensemble document")
        if doc.get("version") != _MODEL_VERSION:
            raise ValueError(f"unsupported model version {doc.get('version')}")
        return cls(
            objective=doc["objective"],
            num_classes=int(doc["num_classes"]),
            base_margin=np.asarray(doc["base_margin"], dtype=np.float64),
            trees_per_class=[
                [Tree.from_nested(t) for t in trees] for trees in doc["trees_per_class"]
            ],
            boundaries=[np.asarray(b, dtype=np.float64) for b in doc["boundaries"]],
            n_features=int(doc["n_features"]),
        )

    def save(self, path: str) -> None:
        with open(path, "w") as fh:
            fh.write(self.to_json())

    @classmethod
    def load(cls, path: str) -> "Ensemble":
        with open(path) as fh:
            return cls.from_json(fh.read())


def _as_dense(rows) -> np.ndarray:
    if sp.issparse(rows):
        return rows.toarray()
    return np.atleast_2d(np.asarray(rows, dtype=np.float64))


def margins_to_probs(margins: np.ndarray, objective: str) -> np.ndarray:
    if objective == BINARY_LOGISTIC:
        p = sigmoid(margins[:, 0])
        return np.column_stack([1.0 - p, p])
    if objective == ONE_VS_ALL:
        s = sigmoid(margins)
        total = s.sum(axis=1, keepdims=True)
        p = s / np.maximum(total, 1e-300)
        p[np.broadcast_to(total == 0.0, p.shape)] = 1.0 / s.shape[1]
        return p
    return softmax(margins)


def predict_proba(ensemble: Ensemble, rows) -> np.ndarray:
    """Per-row per-class probabilities for raw feature rows."""
    return ensemble.predict_proba(rows)


def _clip_prior(p: float) -> float:
    return float(np.clip(p, 1e-12, 1.0 - 1e-12))


def _base_margins(d: LabeledDataset, hp: HyperParams) -> np.ndarray:
    if hp.objective == BINARY_LOGISTIC:
        prior = _clip_prior(float(np.mean(d.labels == 1)))
        return np.array([np.log(prior / (1.0 - prior))])
    if hp.objective == ONE_VS_ALL:
        out = np.empty(hp.num_classes)
        for k in range(hp.num_classes):
            prior = _clip_prior(float(np.mean(d.labels == k)))
            out[k] = np.log(prior / (1.0 - prior))
        return out
    return np.zeros(hp.num_classes)


def _stream_seed(seed: int) -> int:
    return seed & 0xFFFFFFFFFFFFFFFF


def train(
    d: LabeledDataset,
    hp: HyperParams,
    eval_set: tuple[LabeledDataset, MetricFn] | None = None,
) -> tuple[Ensemble, list[float]]:
    """Fit a boosted ensemble; returns the model and a per-iteration eval log.

    Each iteration computes gradients at the current margins, optionally
    applies one-side sampling, grows one tree per class group, and adds the
    tree outputs to the margins.  RNG streams for the sampler and for the
    per-tree feature subsets are derived from (seed, iteration, class), so
    results are a pure function of (data, hyper-parameters, seed).
    """
    if d.n_rows == 0:
        raise ObjectiveMismatch("cannot train on an empty dataset")
    if hp.num_classes != d.task.num_classes:
        raise ObjectiveMismatch(
            f"objective expects {hp.num_classes} classes, dataset task has {d.task.num_classes}"
        )

    binned = build_bins(d, hp.num_bins)
    n = d.n_rows
    groups = hp.n_tree_groups
    base = _base_margins(d, hp)
    margins = np.tile(base, (n, 1))
    labels = d.labels
    seed0 = _stream_seed(hp.seed)

    eval_codes = None
    eval_margins = None
    metric_fn: MetricFn | None = None
    eval_d: LabeledDataset | None = None
    if eval_set is not None:
        eval_d, metric_fn = eval_set
        eval_codes = bin_matrix(eval_d.dense(), binned.boundaries)
        eval_margins = np.tile(base, (eval_d.n_rows, 1))

    trees: list[list[Tree]] = [[] for _ in range(groups)]
    eval_log: list[float] = []
    all_rows = np.arange(n, dtype=np.int64)

    for t in range(hp.iterations):
        g, h = compute_gradients(margins, labels, hp.objective)

        if hp.boosting == GOSS:
            goss_rng = np.random.default_rng([seed0, 1, t])
            rows, mult = goss_sample(
                np.abs(g).sum(axis=1), hp.top_rate, hp.other_rate, goss_rng
            )
        else:
            rows, mult = all_rows, None

        for k in range(groups):
            if mult is None:
                gk, hk = g[:, k], h[:, k]
            else:
                gk = np.zeros(n)
                hk = np.zeros(n)
                gk[rows] = g[rows, k] * mult
                hk[rows] = h[rows, k] * mult
            feat_rng = np.random.default_rng([seed0, 2, t, k])
            tree = grow_tree(binned, gk, hk, rows, hp, feat_rng)
            trees[k].append(tree)
            margins[:, k] += tree.predict_codes(binned.codes)
            if eval_margins is not None:
                eval_margins[:, k] += tree.predict_codes(eval_codes)

        if eval_margins is not None:
            probs = margins_to_probs(eval_margins, hp.objective)
            eval_log.append(float(metric_fn(eval_d, probs)))

    ensemble = Ensemble(
        objective=hp.objective,
        num_classes=hp.num_classes,
        base_margin=base,
        trees_per_class=trees,
        boundaries=binned.boundaries,
        n_features=d.n_features,
    )
    return ensemble, eval_log
