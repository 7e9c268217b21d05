"""Multi-process grid execution and result collection.

One collector process (the caller) spawns N anonymous workers.  Workers share
nothing but the lock directory and their own results file; the collector
merges per-worker files at the end.  Per-trial seeds derive from the grid
index, so the merged results are identical for any worker count.
"""

from __future__ import annotations

import json
import multiprocessing as mp
import os
import tempfile
import time
import uuid
from pathlib import Path
from typing import Any, Callable

import numpy as np

from ..datasets import LabeledDataset
from ..errors import NoRecords
from ..gbdt import BINARY_LOGISTIC, MULTICLASS_SOFTMAX, HyperParams
from ..gbdt.training import train
from ..metrics import default_metric, evaluate_probs
from ..trials import STATUS_FAILED, STATUS_OK, TrialRecord, write_trials_csv
from .grid import Grid, assignment_to_hyperparams
from .locks import HOST_ENV_VAR, acquire_slot, detect_host_id, start_epoch

__all__ = ["run_grid", "collect_results"]

TrialRunner = Callable[[HyperParams, LabeledDataset, LabeledDataset], tuple[float, float]]


def derive_trial_seed(seed: int, grid_index: int) -> int:
    """Stable per-trial seed; a pure function of (base seed, grid index)."""
    return int(np.random.SeedSequence([seed & 0xFFFFFFFFFFFFFFFF, grid_index]).generate_state(1)[0])


def default_trial_runner(
    hp: HyperParams, train_d: LabeledDataset, valid_d: LabeledDataset
) -> tuple[float, float]:
    """Train one configuration and score it on the validation split.

    Wall time covers training plus prediction.
    """
    start = time.perf_counter()
    ensemble, _ = train(train_d, hp)
    probs = ensemble.predict_proba(valid_d.dense())
    seconds = time.perf_counter() - start
    report = evaluate_probs(valid_d, probs, default_metric(valid_d))
    return report.value, seconds


def objective_for_task(task) -> str:
    return BINARY_LOGISTIC if task.kind == "binary" else MULTICLASS_SOFTMAX


def _grid_worker(
    host_id: str,
    indices: list[int],
    assignments: list[dict[str, Any]],
    train_d: LabeledDataset,
    valid_d: LabeledDataset,
    seed: int,
    objective: str,
    lock_dir: str,
    epoch: str,
    slots_per_host: int,
    total_workers: int,
    rendezvous_timeout: float,
    results_path: str,
    worker_tag: str,
    trial_runner: TrialRunner | None,
) -> None:
    # The launcher hands the host identity to the process environment; the
    # lock protocol itself only ever reads it back from there.
    os.environ[HOST_ENV_VAR] = host_id
    acquire_slot(
        lock_dir,
        detect_host_id(),
        slots_per_host,
        worker_tag,
        epoch=epoch,
        total_workers=total_workers,
        timeout=rendezvous_timeout,
    )
    runner = trial_runner or default_trial_runner
    with open(results_path, "w") as fh:
        for i in indices:
            hp = assignment_to_hyperparams(
                assignments[i],
                objective=objective,
                num_classes=train_d.task.num_classes,
                seed=derive_trial_seed(seed, i),
            )
            try:
                score, seconds = runner(hp, train_d, valid_d)
                row = {"grid_index": i, "score": score, "seconds": seconds, "status": STATUS_OK}
            except Exception:
                row = {"grid_index": i, "score": None, "seconds": 0.0, "status": STATUS_FAILED}
            fh.write(json.dumps(row) + "\n")
            fh.flush()


def _read_worker_results(path: Path) -> dict[int, dict[str, Any]]:
    out: dict[int, dict[str, Any]] = {}
    if not path.exists():
        return out
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            try:
                row = json.loads(line)
            except json.JSONDecodeError:
                continue  # truncated tail of a crashed worker
            out[int(row["grid_index"])] = row
    return out


def run_grid(
    grid: Grid,
    train_d: LabeledDataset,
    valid_d: LabeledDataset,
    workers: int = 1,
    slots_per_host: int = 2,
    seed: int = 0,
    *,
    lock_dir: str | None = None,
    work_dir: str | None = None,
    rendezvous_timeout: float = 60.0,
    trial_runner: TrialRunner | None = None,
) -> list[TrialRecord]:
    """Evaluate every grid configuration across a pool of worker processes.

    The grid is split contiguously into ``workers`` partitions.  A crashed
    worker's partition is retried once on a fresh process; trials still
    missing after that are marked failed.  Returns records in grid order.
    """
    if workers < 1:
        raise ValueError("workers must be >= 1")
    assignments = grid.assignments()
    size = len(assignments)
    objective = objective_for_task(train_d.task)

    with tempfile.TemporaryDirectory(prefix="boosthpo-grid-") as tmp:
        base = Path(work_dir) if work_dir else Path(tmp)
        base.mkdir(parents=True, exist_ok=True)
        locks = Path(lock_dir) if lock_dir else base / "locks"
        epoch = f"epoch-{uuid.uuid4().hex[:12]}"
        start_epoch(locks, epoch)

        partitions = np.array_split(np.arange(size), workers)
        ctx = mp.get_context("fork")

        def launch(worker_idx: int, attempt: int) -> tuple[mp.Process, Path]:
            results_path = base / f"worker{worker_idx}-a{attempt}.jsonl"
            proc = ctx.Process(
                target=_grid_worker,
                args=(
                    f"host{worker_idx // slots_per_host}",
                    [int(i) for i in partitions[worker_idx]],
                    assignments,
                    train_d,
                    valid_d,
                    seed,
                    objective,
                    str(locks),
                    epoch,
                    slots_per_host,
                    workers,
                    rendezvous_timeout,
                    str(results_path),
                    f"worker{worker_idx}",
                    trial_runner,
                ),
            )
            proc.start()
            return proc, results_path

        procs = [launch(w, 0) for w in range(workers)]
        for proc, _ in procs:
            proc.join()

        merged: dict[int, dict[str, Any]] = {}
        retries: list[tuple[mp.Process, Path]] = []
        for w, (proc, path) in enumerate(procs):
            merged.update(_read_worker_results(path))
            if proc.exitcode != 0:
                retries.append(launch(w, 1))
        for proc, path in retries:
            proc.join()
            for idx, row in _read_worker_results(path).items():
                if idx not in merged or merged[idx]["status"] != STATUS_OK:
                    merged[idx] = row

    records: list[TrialRecord] = []
    for i in range(size):
        row = merged.get(i)
        if row is None or row["status"] != STATUS_OK:
            records.append(
                TrialRecord(
                    params=assignments[i],
                    validation_score=None,
                    train_seconds=float(row["seconds"]) if row else 0.0,
                    status=STATUS_FAILED,
                )
            )
        else:
            records.append(
                TrialRecord(
                    params=assignments[i],
                    validation_score=float(row["score"]),
                    train_seconds=float(row["seconds"]),
                    status=STATUS_OK,
                )
            )
    return records


def collect_results(records: list[TrialRecord], csv_path=None) -> dict[str, Any]:
    """Aggregate finished trials: best configuration and timing summary.

    Aggregates cover scored trials only; failures are counted.  Optionally
    writes the per-configuration CSV next to the summary.
    """
    if not records:
        raise NoRecords("no trial records to collect")
    if csv_path is not None:
        param_names = list(records[0].params.keys())
        write_trials_csv(records, csv_path, param_names, index_name="grid_index")

    scored = [(i, r) for i, r in enumerate(records) if r.ok]
    summary: dict[str, Any] = {
        "n_trials": len(records),
        "n_failed": len(records) - len(scored),
        "best_score": None,
        "best_index": None,
        "best_params": None,
        "total_seconds": float(sum(r.train_seconds for _, r in scored)),
        "median_seconds": None,
    }
    if scored:
        best_index, best = max(scored, key=lambda pair: pair[1].validation_score)
        summary["best_score"] = best.validation_score
        summary["best_index"] = best_index
        summary["best_params"] = dict(best.params)
        summary["median_seconds"] = float(
            np.median([r.train_seconds for _, r in scored])
        )
    return summary
