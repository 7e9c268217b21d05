"""Trial records and the CSV / JSON-lines log writers shared by the HPO loop
and the grid-search orchestrator."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from typing import Any

from .errors import NoRecords

__all__ = ["TrialRecord", "TrialLogger", "write_trials_csv", "read_trials_csv"]

STATUS_OK = "ok"
STATUS_FAILED = "failed"


@dataclass(frozen=True)
class TrialRecord:
    """One evaluated configuration: parameters, score, wall time, status.

    Failed trials carry no score.
    """

    params: dict[str, Any]
    validation_score: float | None
    train_seconds: float
    status: str = STATUS_OK

    def __post_init__(self):
        if self.status not in (STATUS_OK, STATUS_FAILED):
            raise ValueError(f"unknown status {self.status!r}")
        if self.status == STATUS_FAILED and self.validation_score is not None:
            raise ValueError("failed trials carry no score")

    @property
    def ok(self) -> bool:
        return self.status == STATUS_OK


def _row_for(index: int, record: TrialRecord, param_names: list[str]) -> list:
    row: list[Any] = [index]
    row.extend(record.params.get(name, "") for name in param_names)
    row.append("" if record.validation_score is None else repr(float(record.validation_score)))
    row.append(repr(float(record.train_seconds)))
    row.append(record.status)
    return row


class TrialLogger:
    """Appends each finished trial to a CSV log and a JSON-lines mirror."""

    def __init__(self, csv_path, jsonl_path, param_names: list[str], index_name: str = "trial_index"):
        self.csv_path = str(csv_path)
        self.jsonl_path = str(jsonl_path)
        self.param_names = list(param_names)
        self.index_name = index_name
        with open(self.csv_path, "w", newline="") as fh:
            csv.writer(fh).writerow([index_name, *self.param_names, "score", "seconds", "status"])
        open(self.jsonl_path, "w").close()

    def append(self, index: int, record: TrialRecord) -> None:
        with open(self.csv_path, "a", newline="") as fh:
            csv.writer(fh).writerow(_row_for(index, record, self.param_names))
        with open(self.jsonl_path, "a") as fh:
            fh.write(
                json.dumps(
                    {
                        self.index_name: index,
                        "params": record.params,
                        "score": record.validation_score,
                        "seconds": record.train_seconds,
                        "status": record.status,
                    }
                )
                + "\n"
            )


def write_trials_csv(
    records: list[TrialRecord], path, param_names: list[str], index_name: str = "trial_index"
) -> None:
    with open(str(path), "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([index_name, *param_names, "score", "seconds", "status"])
        for i, rec in enumerate(records):
            writer.writerow(_row_for(i, rec, param_names))


def read_trials_csv(path) -> list[TrialRecord]:
    """Read a trial log back; tolerant of either index column name."""
    records: list[TrialRecord] = []
    with open(str(path), newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise NoRecords(f"{path} is empty")
        special = {"trial_index", "grid_index", "score", "seconds", "status"}
        param_names = [c for c in reader.fieldnames if c not in special]
        for row in reader:
            score = row["score"]
            records.append(
                TrialRecord(
                    params={k: row[k] for k in param_names},
                    validation_score=None if score == "" else float(score),
                    train_seconds=float(row["seconds"]),
                    status=row["status"],
                )
            )
    if not records:
        raise NoRecords(f"no trial rows in {path}")
    return records
