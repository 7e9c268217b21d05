"""Gradient-based one-side sampling.

Rows with the largest absolute gradients are all kept; a small uniform
subsample of the remaining rows is kept with a compensating multiplier
(1 - a) / b so the reweighted gradient sums stay unbiased.
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import BadRates

__all__ = ["goss_sample"]


def _guarded_ceil(x: float) -> int:
    # ceil robust to float fuzz like 0.2 * 100 = 20.000000000000004
    return int(math.ceil(x - 1e-9))


def goss_sample(
    abs_grad: np.ndarray, a: float, b: float, rng: np.random.Generator | int
) -> tuple[np.ndarray, np.ndarray]:
    """Select rows for one boosting iteration.

    abs_grad: per-row |g| (summed across classes for multiclass).
    Returns (row ids ascending, per-row multiplier).  The top ceil(a*n) rows
    by |g| get multiplier 1; ceil(b*n) rows sampled uniformly without
    replacement from the rest get multiplier (1-a)/b.
    """
    # a == 1 keeps every row, so b only matters when a < 1.
    if a < 0 or a > 1 or b <= 0 or (a < 1 and a + b > 1):
        raise BadRates(f"need a in [0, 1], b > 0, a + b <= 1; got a={a}, b={b}")
    if isinstance(rng, (int, np.integer)):
        rng = np.random.default_rng(int(rng))

    g = np.asarray(abs_grad, dtype=np.float64)
    n = g.size
    top_n = min(_guarded_ceil(a * n), n)
    rand_n = _guarded_ceil(b * n)

    # Descending |g|; stable so ties resolve by ascending row id.
    order = np.argsort(-g, kind="stable")
    top_rows = order[:top_n]
    rest = order[top_n:]
    rand_n = min(rand_n, rest.size)
    sampled = rng.choice(rest, size=rand_n, replace=False) if rand_n > 0 else rest[:0]

    rows = np.concatenate([top_rows, sampled])
    mult = np.concatenate(
        [np.ones(top_rows.size), np.full(sampled.size, (1.0 - a) / b)]
    )
    ascending = np.argsort(rows, kind="stable")
    return rows[ascending], mult[ascending]
