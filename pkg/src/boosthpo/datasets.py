"""Dataset loading, synthesis, splitting and summary statistics.

Feature matrices are stored column-oriented (CSC) so per-feature scans used
by histogram construction touch contiguous memory.  Absent sparse entries are
the literal value 0.0.
"""

from __future__ import annotations

import gzip
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .errors import (
    BadShape,
    EmptyDataset,
    FractionOutOfRange,
    MalformedLine,
    NonIntegerLabel,
)

__all__ = [
    "Task",
    "LabeledDataset",
    "SplitResult",
    "load_svmlight",
    "save_svmlight",
    "stratified_split",
    "make_synthetic",
    "class_frequencies",
]


@dataclass(frozen=True)
class Task:
    """Learning task: binary classification or C-class classification."""

    kind: str  # "binary" | "multiclass"
    num_classes: int

    def __post_init__(self):
        if self.kind not in ("binary", "multiclass"):
            raise ValueError(f"unknown task kind {self.kind!r}")
        if self.kind == "binary" and self.num_classes != 2:
            raise ValueError("binary task has exactly 2 classes")
        if self.num_classes < 2:
            raise ValueError("need at least 2 classes")

    @classmethod
    def binary(cls) -> "Task":
        return cls("binary", 2)

    @classmethod
    def multiclass(cls, num_classes: int) -> "Task":
        return cls("multiclass", num_classes)


@dataclass(frozen=True)
class LabeledDataset:
    """Immutable labeled dataset with an optional query grouping.

    features: (n, m) CSC matrix, implicit entries are 0.0
    labels:   (n,) integer class ids in [0, num_classes)
    query_ids: optional (n,) integer array grouping rows into queries
    """

    features: sp.csc_matrix
    labels: np.ndarray
    task: Task
    query_ids: np.ndarray | None = None

    def __post_init__(self):
        feats = sp.csc_matrix(self.features, dtype=np.float64)
        labels = np.asarray(self.labels, dtype=np.int64)
        object.__setattr__(self, "features", feats)
        object.__setattr__(self, "labels", labels)
        if feats.shape[0] != labels.shape[0]:
            raise BadShape(
                f"feature rows {feats.shape[0]} != label count {labels.shape[0]}"
            )
        if self.query_ids is not None:
            qids = np.asarray(self.query_ids, dtype=np.int64)
            object.__setattr__(self, "query_ids", qids)
            if qids.shape[0] != labels.shape[0]:
                raise BadShape("query_ids length != label count")
        if labels.size and (labels.min() < 0 or labels.max() >= self.task.num_classes):
            raise BadShape(
                f"labels outside [0, {self.task.num_classes}) for declared task"
            )

    @property
    def n_rows(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    @property
    def sparsity(self) -> float:
        """Fraction of implicit (zero) entries: 1 - stored / (n * m)."""
        n, m = self.features.shape
        if n * m == 0:
            return 0.0
        return 1.0 - self.features.nnz / (n * m)

    def take(self, rows: np.ndarray) -> "LabeledDataset":
        """Row subset as a new dataset (rows given as an index array)."""
        rows = np.asarray(rows, dtype=np.int64)
        return LabeledDataset(
            features=self.features[rows],
            labels=self.labels[rows],
            task=self.task,
            query_ids=None if self.query_ids is None else self.query_ids[rows],
        )

    def dense(self) -> np.ndarray:
        return self.features.toarray()


@dataclass(frozen=True)
class SplitResult:
    train: LabeledDataset
    holdout: LabeledDataset
    seed: int


def _open_text(path: str):
    if str(path).endswith(".gz"):
        return gzip.open(path, "rt")
    return open(path, "rt")


def load_svmlight(
    path: str,
    task: Task | None = None,
    n_features: int | None = None,
) -> LabeledDataset:
    """Parse an svmlight/libsvm text file into a LabeledDataset.

    Lines look like ``<label> [qid:<q>] <idx>:<val> ...`` with 1-based,
    ascending feature indices; ``#`` starts a comment.  ``n_features``
    overrides the inferred column count so several files can share one
    feature space.  When ``task`` is omitted it is inferred from the labels.
    """
    data: list[float] = []
    indices: list[int] = []
    indptr: list[int] = [0]
    labels: list[int] = []
    qids: list[int] = []
    saw_qid = False
    max_index = 0

    with _open_text(path) as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            try:
                label_f = float(parts[0])
            except ValueError:
                raise MalformedLine(line_no, f"bad label field {parts[0]!r}")
            if label_f != int(label_f):
                raise NonIntegerLabel(f"line {line_no}: label {parts[0]} is not an integer")
            labels.append(int(label_f))

            rest = parts[1:]
            if rest and rest[0].startswith("qid:"):
                try:
                    qids.append(int(rest[0][4:]))
                except ValueError:
                    raise MalformedLine(line_no, f"bad qid field {rest[0]!r}")
                saw_qid = True
                rest = rest[1:]
            elif saw_qid:
                raise MalformedLine(line_no, "qid present on earlier lines but missing here")

            prev_idx = 0
            for tok in rest:
                try:
                    idx_s, val_s = tok.split(":", 1)
                    idx = int(idx_s)
                    val = float(val_s)
                except ValueError:
                    raise MalformedLine(line_no, f"bad feature token {tok!r}")
                if idx < 1:
                    raise MalformedLine(line_no, f"feature index {idx} is not 1-based")
                if idx <= prev_idx:
                    raise MalformedLine(line_no, f"feature indices not ascending at {tok!r}")
                prev_idx = idx
                max_index = max(max_index, idx)
                indices.append(idx - 1)
                data.append(val)
            indptr.append(len(indices))

    if not labels:
        raise EmptyDataset(f"no data rows in {path}")

    m = n_features if n_features is not None else max_index
    if max_index > m:
        raise MalformedLine(0, f"feature index {max_index} exceeds configured width {m}")
    m = max(m, 1)

    labels_arr = np.asarray(labels, dtype=np.int64)
    if labels_arr.min() < 0:
        raise NonIntegerLabel("negative class label")
    if task is None:
        if labels_arr.max() <= 1:
            task = Task.binary()
        else:
            task = Task.multiclass(int(labels_arr.max()) + 1)

    csr = sp.csr_matrix(
        (np.asarray(data), np.asarray(indices, dtype=np.int64), np.asarray(indptr, dtype=np.int64)),
        shape=(len(labels), m),
    )
    return LabeledDataset(
        features=csr.tocsc(),
        labels=labels_arr,
        task=task,
        query_ids=np.asarray(qids, dtype=np.int64) if saw_qid else None,
    )


def save_svmlight(d: LabeledDataset, path: str) -> None:
    """Write the dataset back to svmlight text (1-based indices)."""
    csr = d.features.tocsr()
    out = gzip.open(path, "wt") if str(path).endswith(".gz") else open(path, "wt")
    with out as fh:
        for i in range(d.n_rows):
            fields = [str(int(d.labels[i]))]
            if d.query_ids is not None:
                fields.append(f"qid:{int(d.query_ids[i])}")
            start, end = csr.indptr[i], csr.indptr[i + 1]
            for j, v in zip(csr.indices[start:end], csr.data[start:end]):
                fields.append(f"{j + 1}:{float(v)!r}")
            fh.write(" ".join(fields) + "\n")


def _round_half_up(x: float) -> int:
    return int(np.floor(x + 0.5))


def stratified_split(d: LabeledDataset, fraction: float, seed: int) -> SplitResult:
    """Stratified train/holdout split.

    Per class ``c`` the holdout receives ``round(fraction * count(c))`` rows.
    When query ids are present, whole queries are assigned to one side and
    stratification uses each query's majority label, so no query is ever
    fragmented across the split.
    """
    if not (0.0 <= fraction < 1.0):
        raise FractionOutOfRange(f"fraction {fraction} not in [0, 1)")
    if d.n_rows == 0:
        raise EmptyDataset("cannot split an empty dataset")

    rng = np.random.default_rng(seed)
    holdout_mask = np.zeros(d.n_rows, dtype=bool)

    if d.query_ids is None:
        for c in range(d.task.num_classes):
            rows = np.flatnonzero(d.labels == c)
            if rows.size == 0:
                continue
            k = _round_half_up(fraction * rows.size)
            pick = rng.permutation(rows.size)[:k]
            holdout_mask[rows[pick]] = True
    else:
        unique_q = np.unique(d.query_ids)
        majority = np.empty(unique_q.size, dtype=np.int64)
        for qi, q in enumerate(unique_q):
            counts = np.bincount(
                d.labels[d.query_ids == q], minlength=d.task.num_classes
            )
            majority[qi] = int(np.argmax(counts))
        for c in range(d.task.num_classes):
            qs = np.flatnonzero(majority == c)
            if qs.size == 0:
                continue
            k = _round_half_up(fraction * qs.size)
            pick = rng.permutation(qs.size)[:k]
            for q in unique_q[qs[pick]]:
                holdout_mask[d.query_ids == q] = True

    holdout_rows = np.flatnonzero(holdout_mask)
    train_rows = np.flatnonzero(~holdout_mask)
    return SplitResult(train=d.take(train_rows), holdout=d.take(holdout_rows), seed=seed)


def make_synthetic(
    n: int, m: int, task: Task, separation: float, seed: int
) -> LabeledDataset:
    """Class-conditional Gaussian data with one random mean direction per class.

    Labels are balanced (round-robin then shuffled).  Multiclass datasets also
    carry query ids grouping consecutive rows into queries of ten rows, which
    is what the ranking metric needs.
    """
    if n < 2 or m < 1:
        raise BadShape(f"need n >= 2 and m >= 1, got n={n}, m={m}")
    if separation < 0:
        raise BadShape(f"separation must be >= 0, got {separation}")

    rng = np.random.default_rng(seed)
    c = task.num_classes
    directions = rng.normal(size=(c, m))
    directions /= np.linalg.norm(directions, axis=1, keepdims=True)

    labels = np.arange(n, dtype=np.int64) % c
    rng.shuffle(labels)
    feats = rng.normal(size=(n, m)) + separation * directions[labels]

    query_ids = None
    if task.kind == "multiclass":
        query_ids = np.arange(n, dtype=np.int64) // 10
    return LabeledDataset(
        features=sp.csc_matrix(feats), labels=labels, task=task, query_ids=query_ids
    )


def class_frequencies(d: LabeledDataset) -> np.ndarray:
    """Per-class empirical frequencies; sums to 1."""
    if d.n_rows == 0:
        raise EmptyDataset("no rows")
    counts = np.bincount(d.labels, minlength=d.task.num_classes)
    return counts / float(d.n_rows)
