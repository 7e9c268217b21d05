"""Sequential suggest/observe optimization with a fixed evaluation budget."""

from __future__ import annotations

import time
from typing import Any, Callable

import numpy as np
from scipy.stats import qmc

from ..trials import STATUS_FAILED, STATUS_OK, TrialRecord
from .acquisition import suggest_next
from .gp import fit_gp
from .space import ParamSpace

__all__ = ["run_hpo"]

Objective = Callable[[dict[str, Any]], tuple[float, float]]
TrialCallback = Callable[[int, TrialRecord], None]


def _evaluate(objective: Objective, params: dict[str, Any]) -> TrialRecord:
    start = time.perf_counter()
    try:
        score, seconds = objective(params)
    except Exception:
        return TrialRecord(
            params=params,
            validation_score=None,
            train_seconds=time.perf_counter() - start,
            status=STATUS_FAILED,
        )
    return TrialRecord(
        params=params,
        validation_score=float(score),
        train_seconds=float(seconds),
        status=STATUS_OK,
    )


def _surrogate_view(records: list[TrialRecord]) -> list[TrialRecord]:
    """Failed trials enter the surrogate with the worst observed score."""
    scores = [r.validation_score for r in records if r.ok]
    worst = min(scores)
    out = []
    for r in records:
        if r.ok:
            out.append(r)
        else:
            out.append(
                TrialRecord(
                    params=r.params,
                    validation_score=worst,
                    train_seconds=r.train_seconds,
                    status=STATUS_OK,
                )
            )
    return out


def run_hpo(
    space: ParamSpace,
    objective: Objective,
    budget: int,
    init_count: int = 8,
    seed: int = 0,
    callback: TrialCallback | None = None,
) -> list[TrialRecord]:
    """Optimize ``objective`` (params -> (score, seconds), higher is better).

    The first ``init_count`` trials come from a seeded Latin hypercube; the
    rest follow the fit -> suggest -> evaluate cycle.  Objective exceptions
    are recorded as failed trials and the loop continues.  Returns exactly
    ``budget`` records in evaluation order.
    """
    if budget < init_count or init_count < 2:
        raise ValueError(f"need budget >= init_count >= 2, got {budget}, {init_count}")

    d = space.encoded_dim
    rng = np.random.default_rng([seed & 0xFFFFFFFFFFFFFFFF, 0x5EED])
    records: list[TrialRecord] = []

    def run_one(params: dict[str, Any]) -> None:
        record = _evaluate(objective, params)
        records.append(record)
        if callback is not None:
            callback(len(records) - 1, record)

    design = qmc.LatinHypercube(d=d, seed=seed & 0xFFFFFFFFFFFFFFFF).random(init_count)
    for row in design:
        run_one(space.decode(row))

    while len(records) < budget:
        n_ok = sum(r.ok for r in records)
        if n_ok >= 2:
            state = fit_gp(_surrogate_view(records), space)
            params = space.decode(suggest_next(state, space, rng))
            if any(params == r.params for r in records):
                params = space.decode(rng.random(d))
        else:
            params = space.decode(rng.random(d))
        run_one(params)

    return records
