"""Quantile binning of raw feature values.

Split candidates come from empirical quantiles of each feature, decided once
over the full training set.  A feature with at most ``num_bins`` distinct
values gets one bin per distinct value with boundaries at midpoints.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from ..datasets import LabeledDataset

__all__ = ["BinnedMatrix", "build_bins", "bin_column", "bin_matrix"]


@dataclass(frozen=True)
class BinnedMatrix:
    """Per-row bin ids plus the boundaries that produced them.

    bin id = number of boundaries <= value, so rows with
    ``bin <= t`` are exactly those with ``value < boundaries[t]``.
    """

    codes: np.ndarray  # (n, m) uint16, Fortran order
    boundaries: list[np.ndarray]  # per feature, strictly ascending
    num_bins_used: np.ndarray  # (m,) int64

    @property
    def n_rows(self) -> int:
        return self.codes.shape[0]

    @property
    def n_features(self) -> int:
        return self.codes.shape[1]


def bin_column(values: np.ndarray, boundaries: np.ndarray) -> np.ndarray:
    """Map raw values to bin ids: count of boundaries <= value."""
    return np.searchsorted(boundaries, values, side="right").astype(np.uint16)


def _column_boundaries(col: np.ndarray, num_bins: int) -> np.ndarray:
    distinct = np.unique(col)
    if distinct.size <= 1:
        return np.empty(0, dtype=np.float64)
    if distinct.size <= num_bins:
        return (distinct[:-1] + distinct[1:]) / 2.0
    qs = np.arange(1, num_bins) / num_bins
    return np.unique(np.quantile(col, qs))


def build_bins(d: LabeledDataset | sp.spmatrix | np.ndarray, num_bins: int) -> BinnedMatrix:
    """Discretize every feature of a dataset (or raw matrix) into quantile bins."""
    if num_bins < 2:
        raise ValueError("num_bins must be >= 2")
    if isinstance(d, LabeledDataset):
        feats = d.features
    else:
        feats = sp.csc_matrix(d, dtype=np.float64)

    n, m = feats.shape
    codes = np.zeros((n, m), dtype=np.uint16, order="F")
    boundaries: list[np.ndarray] = []
    used = np.empty(m, dtype=np.int64)
    for j in range(m):
        col = feats[:, [j]].toarray().ravel()
        b = _column_boundaries(col, num_bins)
        boundaries.append(b)
        used[j] = b.size + 1
        codes[:, j] = bin_column(col, b)
    return BinnedMatrix(codes=codes, boundaries=boundaries, num_bins_used=used)


def bin_matrix(raw: np.ndarray, boundaries: list[np.ndarray]) -> np.ndarray:
    """Bin raw rows with previously computed boundaries.

    Rows may be narrower than the training width; missing trailing features
    are treated as 0.
    """
    raw = np.atleast_2d(np.asarray(raw, dtype=np.float64))
    n, width = raw.shape
    m = len(boundaries)
    if width > m:
        raise ValueError(f"rows have {width} features, model knows {m}")
    codes = np.zeros((n, m), dtype=np.uint16, order="F")
    for j in range(m):
        col = raw[:, j] if j < width else np.zeros(n)
        codes[:, j] = bin_column(col, boundaries[j])
    return codes
