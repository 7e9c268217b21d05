"""First/second order gradient statistics of the classification losses."""

from __future__ import annotations

import numpy as np

from ..errors import NonFiniteMargin
from .params import BINARY_LOGISTIC, MULTICLASS_SOFTMAX, ONE_VS_ALL

__all__ = ["sigmoid", "softmax", "compute_gradients"]


def sigmoid(x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x, dtype=np.float64)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def softmax(margins: np.ndarray) -> np.ndarray:
    z = margins - margins.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


def compute_gradients(
    margins: np.ndarray, labels: np.ndarray, objective: str
) -> tuple[np.ndarray, np.ndarray]:
    """Per-row per-class (g, h) of the loss at the current margins.

    margins: (n, C) raw scores, C = 1 for the binary objective.
    Returns g, h with the same shape; h >= 0 always.
    """
    margins = np.asarray(margins, dtype=np.float64)
    if margins.ndim == 1:
        margins = margins[:, None]
    if not np.all(np.isfinite(margins)):
        raise NonFiniteMargin("margins contain nan or inf")
    y = np.asarray(labels, dtype=np.int64)

    if objective == BINARY_LOGISTIC:
        p = sigmoid(margins[:, 0])
        g = p - y
        h = p * (1.0 - p)
        return g[:, None], h[:, None]

    if objective == MULTICLASS_SOFTMAX:
        p = softmax(margins)
        g = p.copy()
        g[np.arange(y.size), y] -= 1.0
        h = p * (1.0 - p)
        return g, h

    if objective == ONE_VS_ALL:
        p = sigmoid(margins)
        onehot = np.zeros_like(p)
        onehot[np.arange(y.size), y] = 1.0
        g = p - onehot
        h = p * (1.0 - p)
        return g, h

    raise ValueError(f"unknown objective {objective!r}")
