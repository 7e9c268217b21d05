"""Level-wise regression tree growth over binned features."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .binning import BinnedMatrix
from .params import MIN_CHILD_HESSIAN, HyperParams

__all__ = ["Tree", "split_gain", "grow_tree"]

_NO_CHILD = -1


@dataclass
class Tree:
    """Flat-array binary tree; root at index 0.

    Internal nodes route rows with ``bin <= threshold`` (equivalently raw
    ``value < boundaries[threshold]``) to the left child.
    """

    feature: list[int] = field(default_factory=list)
    threshold: list[int] = field(default_factory=list)
    left: list[int] = field(default_factory=list)
    right: list[int] = field(default_factory=list)
    value: list[float] = field(default_factory=list)

    def add_node(self) -> int:
        self.feature.append(_NO_CHILD)
        self.threshold.append(_NO_CHILD)
        self.left.append(_NO_CHILD)
        self.right.append(_NO_CHILD)
        self.value.append(0.0)
        return len(self.value) - 1

    def set_split(self, node: int, feature: int, threshold: int, left: int, right: int) -> None:
        self.feature[node] = feature
        self.threshold[node] = threshold
        self.left[node] = left
        self.right[node] = right

    def is_leaf(self, node: int) -> bool:
        return self.left[node] == _NO_CHILD

    @property
    def n_nodes(self) -> int:
        return len(self.value)

    def depth(self) -> int:
        def walk(node: int) -> int:
            if self.is_leaf(node):
                return 0
            return 1 + max(walk(self.left[node]), walk(self.right[node]))

        return walk(0) if self.n_nodes else 0

    def predict_codes(self, codes: np.ndarray) -> np.ndarray:
        """Evaluate the tree for every row of a binned matrix."""
        n = codes.shape[0]
        node = np.zeros(n, dtype=np.int64)
        feature = np.asarray(self.feature, dtype=np.int64)
        threshold = np.asarray(self.threshold, dtype=np.int64)
        left = np.asarray(self.left, dtype=np.int64)
        right = np.asarray(self.right, dtype=np.int64)
        value = np.asarray(self.value, dtype=np.float64)

        active = left[node] != _NO_CHILD
        while np.any(active):
            idx = np.flatnonzero(active)
            cur = node[idx]
            go_left = codes[idx, feature[cur]] <= threshold[cur]
            node[idx] = np.where(go_left, left[cur], right[cur])
            active = left[node] != _NO_CHILD
        return value[node]

    def to_nested(self) -> dict:
        """Nested-object form used by the JSON model format."""

        def walk(node: int) -> dict:
            if self.is_leaf(node):
                return {"value": self.value[node]}
            return {
                "feature": self.feature[node],
                "threshold_bin": self.threshold[node],
                "left": walk(self.left[node]),
                "right": walk(self.right[node]),
            }

        return walk(0)

    @classmethod
    def from_nested(cls, obj: dict) -> "Tree":
        tree = cls()

        def walk(o: dict) -> int:
            node = tree.add_node()
            if "value" in o:
                tree.value[node] = float(o["value"])
                return node
            left = walk(o["left"])
            right = walk(o["right"])
            tree.set_split(node, int(o["feature"]), int(o["threshold_bin"]), left, right)
            return node

        walk(obj)
        return tree


def split_gain(g_left: float, h_left: float, g_right: float, h_right: float, lam: float) -> float:
    """Second-order loss reduction of a candidate split.

    0.5 * [GL^2/(HL+lam) + GR^2/(HR+lam) - (GL+GR)^2/(HL+HR+lam)].
    Nonnegative when lam == 0; may go negative for lam > 0.
    """
    g_tot = g_left + g_right
    h_tot = h_left + h_right
    return 0.5 * (
        g_left * g_left / (h_left + lam)
        + g_right * g_right / (h_right + lam)
        - g_tot * g_tot / (h_tot + lam)
    )


def _leaf_value(g_sum: float, h_sum: float, lam: float, learning_rate: float) -> float:
    denom = h_sum + lam
    if denom <= 0.0:
        return 0.0
    return -g_sum / denom * learning_rate


def _best_split_for_node(
    binned: BinnedMatrix,
    g: np.ndarray,
    h: np.ndarray,
    rows: np.ndarray,
    feature_ids: np.ndarray,
    lam: float,
) -> tuple[float, int, int] | None:
    """Scan candidate (feature, bin) splits; ties keep the lowest feature
    then lowest bin.  Returns (gain, feature, threshold) or None."""
    g_rows = g[rows]
    h_rows = h[rows]
    best_gain = 0.0
    best: tuple[float, int, int] | None = None
    for f in feature_ids:
        used = int(binned.num_bins_used[f])
        if used < 2:
            continue
        codes = binned.codes[rows, f]
        hist_g = np.bincount(codes, weights=g_rows, minlength=used)
        hist_h = np.bincount(codes, weights=h_rows, minlength=used)
        cum_g = np.cumsum(hist_g)
        cum_h = np.cumsum(hist_h)
        g_tot = cum_g[-1]
        h_tot = cum_h[-1]

        gl = cum_g[:-1]
        hl = cum_h[:-1]
        gr = g_tot - gl
        hr = h_tot - hl
        valid = (hl >= MIN_CHILD_HESSIAN) & (hr >= MIN_CHILD_HESSIAN)
        if not np.any(valid):
            continue
        with np.errstate(invalid="ignore", divide="ignore"):
            gains = 0.5 * (
                gl * gl / (hl + lam)
                + gr * gr / (hr + lam)
                - g_tot * g_tot / (h_tot + lam)
            )
        gains[~valid] = -np.inf
        t = int(np.argmax(gains))
        if gains[t] > best_gain:
            best_gain = float(gains[t])
            best = (best_gain, int(f), t)
    return best


def grow_tree(
    binned: BinnedMatrix,
    g: np.ndarray,
    h: np.ndarray,
    row_ids: np.ndarray,
    hp: HyperParams,
    rng: np.random.Generator | None = None,
) -> Tree:
    """Grow one regression tree level-wise to ``hp.max_depth``.

    ``g`` and ``h`` already include any sampling multipliers.  A node becomes
    a leaf when no candidate split has positive gain or a child's hessian sum
    would fall below the minimum.  Leaf value is -G/(H+lam) * learning_rate.
    """
    rows = np.asarray(row_ids, dtype=np.int64)
    if rows.size == 0:
        raise ValueError("row_ids must be nonempty")
    m = binned.n_features

    n_sub = min(m, max(1, int(math.ceil(hp.feature_fraction * m - 1e-9))))
    if n_sub == m:
        feature_ids = np.arange(m, dtype=np.int64)
    else:
        if rng is None:
            rng = np.random.default_rng(hp.seed)
        feature_ids = np.sort(rng.choice(m, size=n_sub, replace=False))

    lam = hp.reg_lambda
    tree = Tree()
    root = tree.add_node()
    frontier: list[tuple[int, np.ndarray]] = [(root, rows)]

    for _ in range(hp.max_depth):
        next_frontier: list[tuple[int, np.ndarray]] = []
        for node, node_rows in frontier:
            found = _best_split_for_node(binned, g, h, node_rows, feature_ids, lam)
            if found is None:
                tree.value[node] = _leaf_value(
                    float(g[node_rows].sum()), float(h[node_rows].sum()), lam, hp.learning_rate
                )
                continue
            _, f, t = found
            go_left = binned.codes[node_rows, f] <= t
            left_rows = node_rows[go_left]
            right_rows = node_rows[~go_left]
            left = tree.add_node()
            right = tree.add_node()
            tree.set_split(node, f, t, left, right)
            next_frontier.append((left, left_rows))
            next_frontier.append((right, right_rows))
        frontier = next_frontier
        if not frontier:
            break

    for node, node_rows in frontier:
        tree.value[node] = _leaf_value(
            float(g[node_rows].sum()), float(h[node_rows].sum()), lam, hp.learning_rate
        )
    return tree
