"""Command-line entry points tying the library into reproducible experiments.

Exit codes: 0 success, 2 configuration error, 3 data error, 4 runtime failure.
All outputs are deterministic for a fixed config and seed; wall-clock
timestamps go to a separate metadata file.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .bayesopt import run_hpo
from .config import ConfigError, ExperimentConfig
from .datasets import LabeledDataset, class_frequencies, stratified_split
from .errors import DataError, NoRecords
from .gbdt import Ensemble, train
from .metrics import baseline_predict, default_metric, evaluate_probs
from .orchestrator import assignment_to_hyperparams, collect_results, run_grid
from .reporting import compute_curve, render_curve_png, write_curve_csv
from .trials import TrialLogger, read_trials_csv

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_RUNTIME = 4


def _out_dir(cfg: ExperimentConfig) -> Path:
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_json(path: Path, obj) -> None:
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _write_metadata(out: Path, command: str, started: float) -> None:
    _write_json(
        out / "metadata.json",
        {
            "command": command,
            "started_utc": datetime.fromtimestamp(started, tz=timezone.utc).isoformat(),
            "wall_seconds": time.time() - started,
        },
    )


def _split(cfg: ExperimentConfig, data: LabeledDataset):
    return stratified_split(data, cfg.split_fraction, cfg.split_seed)


def _score(d: LabeledDataset, probs: np.ndarray):
    return evaluate_probs(d, probs, default_metric(d))


def cmd_train(cfg: ExperimentConfig) -> int:
    out = _out_dir(cfg)
    data = cfg.load_dataset()
    split = _split(cfg, data)
    hp = cfg.hyperparams(data.task)

    ensemble, _ = train(split.train, hp)
    ensemble.save(out / "model.json")

    report_obj = {"metric": None, "value": None, "n_evaluated": 0}
    if split.holdout.n_rows:
        report = _score(split.holdout, ensemble.predict_proba(split.holdout.dense()))
        report_obj = json.loads(report.to_json())
    _write_json(out / "report.json", report_obj)
    print(f"model: {out / 'model.json'}")
    print(f"validation {report_obj['metric']}: {report_obj['value']}")
    return EXIT_OK


def cmd_eval(cfg: ExperimentConfig, model_path: str) -> int:
    out = _out_dir(cfg)
    data = cfg.load_dataset()
    ensemble = Ensemble.load(model_path)
    report = _score(data, ensemble.predict_proba(data.dense()))
    _write_json(out / "eval_report.json", json.loads(report.to_json()))
    print(f"{report.metric}: {report.value:.6f} over {report.n_evaluated}")
    return EXIT_OK


def cmd_baseline(cfg: ExperimentConfig) -> int:
    out = _out_dir(cfg)
    data = cfg.load_dataset()
    split = _split(cfg, data)
    freqs = class_frequencies(split.train)
    eval_d = split.holdout if split.holdout.n_rows else split.train

    probs, sampled = baseline_predict(freqs, eval_d.n_rows, seed=cfg.seed)
    report = _score(eval_d, probs)
    sampled_report = None
    if data.task.kind == "binary":
        onehot = np.zeros_like(probs)
        onehot[np.arange(sampled.size), sampled] = 1.0
        sampled_report = _score(eval_d, onehot).value
    _write_json(
        out / "baseline_report.json",
        {
            "metric": report.metric,
            "value": report.value,
            "value_sampled_labels": sampled_report,
            "train_frequencies": [float(f) for f in freqs],
            "n_evaluated": report.n_evaluated,
        },
    )
    print(f"baseline {report.metric}: {report.value:.6f}")
    return EXIT_OK


def cmd_grid(cfg: ExperimentConfig) -> int:
    out = _out_dir(cfg)
    data = cfg.load_dataset()
    split = _split(cfg, data)
    grid = cfg.grid()

    records = run_grid(
        grid,
        split.train,
        split.holdout,
        workers=cfg.workers,
        slots_per_host=cfg.slots_per_host,
        seed=cfg.seed,
    )
    summary = collect_results(records, csv_path=out / "grid_results.csv")
    _write_json(out / "grid_summary.json", summary)
    print(f"grid size {summary['n_trials']}, best {summary['best_score']}")
    return EXIT_OK


def cmd_hpo(cfg: ExperimentConfig) -> int:
    out = _out_dir(cfg)
    data = cfg.load_dataset()
    split = _split(cfg, data)
    space = cfg.param_space()
    objective_name = cfg.objective_for(data.task)
    metric = default_metric(split.holdout)

    def objective(params: dict) -> tuple[float, float]:
        hp = assignment_to_hyperparams(
            params, objective=objective_name, num_classes=data.task.num_classes, seed=cfg.seed
        )
        start = time.perf_counter()
        ensemble, _ = train(split.train, hp)
        probs = ensemble.predict_proba(split.holdout.dense())
        seconds = time.perf_counter() - start
        return evaluate_probs(split.holdout, probs, metric).value, seconds

    logger = TrialLogger(out / "trials.csv", out / "trials.jsonl", space.names)
    records = run_hpo(
        space,
        objective,
        budget=cfg.budget,
        init_count=cfg.init_count,
        seed=cfg.seed,
        callback=logger.append,
    )

    scored = [r for r in records if r.ok]
    best = max(scored, key=lambda r: r.validation_score) if scored else None
    summary = {
        "n_trials": len(records),
        "n_failed": len(records) - len(scored),
        "metric": metric,
        "best_score": None if best is None else best.validation_score,
        "best_params": None if best is None else best.params,
        "test_score": None,
    }

    test_d = cfg.load_test_dataset()
    if best is not None and test_d is not None:
        hp = assignment_to_hyperparams(
            best.params, objective=objective_name, num_classes=data.task.num_classes, seed=cfg.seed
        )
        ensemble, _ = train(split.train, hp)
        summary["test_score"] = evaluate_probs(
            test_d, ensemble.predict_proba(test_d.dense()), default_metric(test_d)
        ).value

    _write_json(out / "hpo_summary.json", summary)
    print(f"{len(records)} trials, best {metric} {summary['best_score']}")
    return EXIT_OK


def cmd_report_curve(cfg: ExperimentConfig, log_path: str, figure: bool) -> int:
    out = _out_dir(cfg)
    records = read_trials_csv(log_path)
    rows = compute_curve(records)
    write_curve_csv(rows, out / "curve.csv")
    if figure:
        render_curve_png(rows, out / "curve.png")
        print(f"wrote {out / 'curve.csv'} and {out / 'curve.png'}")
    else:
        print(f"wrote {out / 'curve.csv'}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="boosthpo",
        description="Gradient-boosted trees with grid-search and Bayesian HPO harnesses.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, config_required: bool = True):
        p.add_argument("--config", required=config_required, help="experiment JSON document")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--workers", type=int, default=None)
        p.add_argument("--slots-per-host", type=int, default=None)
        p.add_argument("--out", default=None, help="output directory")
        p.add_argument("--preset", default=None, help="named search preset, e.g. lgbm-grid or xgb-hpo")

    common(sub.add_parser("train", help="train one configuration"))
    common(sub.add_parser("grid", help="parallel grid search"))
    common(sub.add_parser("hpo", help="Bayesian hyper-parameter optimization"))

    p_eval = sub.add_parser("eval", help="evaluate a saved model")
    common(p_eval)
    p_eval.add_argument("--model", required=True, help="model JSON file")

    common(sub.add_parser("baseline", help="frequency-baseline scores"))

    p_curve = sub.add_parser("report-curve", help="best-score-vs-runtime curve from a trial log")
    common(p_curve, config_required=False)
    p_curve.add_argument("--log", required=True, help="trials.csv or grid_results.csv")
    p_curve.add_argument("--no-figure", action="store_true", help="skip the PNG rendering")

    return parser


def _load_config(args) -> ExperimentConfig:
    overrides = {
        "seed": args.seed,
        "workers": args.workers,
        "slots_per_host": args.slots_per_host,
        "out_dir": args.out,
        "preset": args.preset,
    }
    if args.config is None:
        return ExperimentConfig.from_dict({}, overrides)
    return ExperimentConfig.from_file(args.config, overrides)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    started = time.time()
    try:
        cfg = _load_config(args)
        out = _out_dir(cfg)
        if args.command == "train":
            code = cmd_train(cfg)
        elif args.command == "grid":
            code = cmd_grid(cfg)
        elif args.command == "hpo":
            code = cmd_hpo(cfg)
        elif args.command == "eval":
            code = cmd_eval(cfg, args.model)
        elif args.command == "baseline":
            code = cmd_baseline(cfg)
        elif args.command == "report-curve":
            code = cmd_report_curve(cfg, args.log, figure=not args.no_figure)
        else:  # pragma: no cover
            raise ConfigError(f"unknown command {args.command}")
        _write_metadata(out, args.command, started)
        return code
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DataError, FileNotFoundError, NoRecords) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except Exception as exc:  # noqa: BLE001 - the CLI boundary reports, not raises
        print(f"runtime failure: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
