"""Evaluation metrics: AUC-ROC, NDCG-10 with expected relevance, and the
frequency-baseline classifier."""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata

from .datasets import LabeledDataset
from .errors import NotAProbability, RelevanceOutOfRange, SingleClass

__all__ = [
    "EvalReport",
    "auc_roc",
    "expected_relevance",
    "most_probable_relevance",
    "ndcg_at_10",
    "baseline_predict",
    "evaluate_probs",
    "default_metric",
    "log_loss",
]


@dataclass(frozen=True)
class EvalReport:
    metric: str
    value: float
    n_evaluated: int
    per_query: np.ndarray | None = None

    def to_json(self) -> str:
        return json.dumps(
            {"metric": self.metric, "value": self.value, "n_evaluated": self.n_evaluated}
        )


def auc_roc(labels, scores) -> float:
    """Probability that a random positive outranks a random negative.

    Ties count one half, which matches trapezoidal integration of the ROC
    curve.  Computed from average ranks, so it is O(n log n).
    """
    y = np.asarray(labels)
    s = np.asarray(scores, dtype=np.float64)
    if y.shape != s.shape:
        raise ValueError("labels and scores must have equal length")
    n_pos = int(np.sum(y == 1))
    n_neg = int(np.sum(y == 0))
    if n_pos == 0 or n_neg == 0:
        raise SingleClass("AUC needs both classes present")
    ranks = rankdata(s, method="average")
    pos_rank_sum = float(np.sum(ranks[y == 1]))
    return (pos_rank_sum - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg)


def _check_probs(probs: np.ndarray, tol: float = 1e-6) -> np.ndarray:
    p = np.atleast_2d(np.asarray(probs, dtype=np.float64))
    if np.any(p < -tol):
        raise NotAProbability("negative probability component")
    sums = p.sum(axis=1)
    if np.any(np.abs(sums - 1.0) > tol):
        raise NotAProbability(f"rows do not sum to 1 within {tol}")
    return p


def expected_relevance(probs) -> np.ndarray | float:
    """Expected relevance sum_k k * p_k over relevance classes 0..4."""
    p = _check_probs(probs)
    if p.shape[1] != 5:
        raise NotAProbability(f"expected 5 relevance classes, got {p.shape[1]}")
    out = p @ np.arange(5, dtype=np.float64)
    return float(out[0]) if np.asarray(probs).ndim == 1 else out


def most_probable_relevance(probs) -> np.ndarray | int:
    """Mode variant for probability-free models: argmax class, lowest index on ties."""
    p = _check_probs(probs)
    if p.shape[1] != 5:
        raise NotAProbability(f"expected 5 relevance classes, got {p.shape[1]}")
    out = np.argmax(p, axis=1)
    return int(out[0]) if np.asarray(probs).ndim == 1 else out


def _dcg_at_10(relevance: np.ndarray) -> float:
    top = relevance[:10].astype(np.float64)
    discounts = np.log2(np.arange(2, top.size + 2, dtype=np.float64))
    return float(np.sum((np.exp2(top) - 1.0) / discounts))


def ndcg_at_10(query_ids, true_relevance, predicted_relevance) -> EvalReport:
    """Mean per-query NDCG at cutoff 10.

    Per query the rows are ordered by predicted relevance descending (stable
    on original row order for ties), DCG@10 uses gain 2^rel - 1 and discount
    1/log2(i + 1), and is divided by the DCG of the ideal ordering.  Queries
    whose ideal DCG is zero contribute 0 to the mean.
    """
    qid = np.asarray(query_ids, dtype=np.int64)
    rel = np.asarray(true_relevance, dtype=np.int64)
    pred = np.asarray(predicted_relevance, dtype=np.float64)
    if not (qid.shape == rel.shape == pred.shape):
        raise ValueError("query_ids, true_relevance, predicted_relevance must align")
    if qid.size == 0:
        raise ValueError("need at least one query")
    if rel.min() < 0 or rel.max() > 4:
        raise RelevanceOutOfRange("true relevance must lie in 0..4")

    unique_q = np.unique(qid)
    per_query = np.zeros(unique_q.size, dtype=np.float64)
    for i, q in enumerate(unique_q):
        rows = np.flatnonzero(qid == q)
        order = np.argsort(-pred[rows], kind="stable")
        dcg = _dcg_at_10(rel[rows][order])
        ideal = _dcg_at_10(np.sort(rel[rows])[::-1])
        per_query[i] = dcg / ideal if ideal > 0 else 0.0
    return EvalReport(
        metric="ndcg@10",
        value=float(per_query.mean()),
        n_evaluated=int(unique_q.size),
        per_query=per_query,
    )


def baseline_predict(
    train_frequencies, n: int, seed: int
) -> tuple[np.ndarray, np.ndarray]:
    """Frequency baseline: constant class-probability rows plus sampled labels.

    Every row's probability vector equals the training frequencies; sampled
    labels are drawn from that distribution, deterministically per seed.
    """
    freqs = np.asarray(train_frequencies, dtype=np.float64)
    _check_probs(freqs, tol=1e-9)
    rng = np.random.default_rng(seed)
    probs = np.tile(freqs, (n, 1))
    labels = rng.choice(freqs.size, size=n, p=freqs)
    return probs, labels.astype(np.int64)


def log_loss(labels, probs, eps: float = 1e-15) -> float:
    """Mean negative log-likelihood of the true class."""
    y = np.asarray(labels, dtype=np.int64)
    p = np.clip(np.asarray(probs, dtype=np.float64), eps, 1.0)
    return float(-np.mean(np.log(p[np.arange(y.size), y])))


def evaluate_probs(d: LabeledDataset, probs: np.ndarray, metric: str) -> EvalReport:
    """Score a per-row per-class probability matrix against a dataset.

    ``metric`` is "auc" (binary, positive-class column) or "ndcg@10"
    (5-class relevance with query ids).
    """
    p = np.atleast_2d(np.asarray(probs, dtype=np.float64))
    if metric == "auc":
        value = auc_roc(d.labels, p[:, -1])
        return EvalReport(metric="auc", value=value, n_evaluated=d.n_rows)
    if metric == "ndcg@10":
        if d.query_ids is None:
            raise ValueError("ndcg@10 needs query ids")
        return ndcg_at_10(d.query_ids, d.labels, expected_relevance(p))
    raise ValueError(f"unknown metric {metric!r}")


def default_metric(d: LabeledDataset) -> str:
    return "auc" if d.task.kind == "binary" else "ndcg@10"
