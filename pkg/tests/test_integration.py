"""Cross-module checks that need a trained model on synthetic data."""

import json

import numpy as np

from boosthpo.bayesopt import Continuous, ParamSpace, fit_gp, run_hpo, suggest_next
from boosthpo.cli import main as cli_main
from boosthpo.datasets import Task, class_frequencies, make_synthetic, stratified_split
from boosthpo.gbdt import MULTICLASS_SOFTMAX, HyperParams, train
from boosthpo.metrics import auc_roc, baseline_predict, evaluate_probs
from boosthpo.trials import TrialRecord


def test_wide_separation_reaches_near_perfect_auc():
    # large class separation forces near-separability
    data = make_synthetic(2000, 10, Task.binary(), separation=4.0, seed=0)
    split = stratified_split(data, 0.25, seed=1)
    ensemble, _ = train(split.train, HyperParams(iterations=50, max_depth=4, seed=2))
    probs = ensemble.predict_proba(split.holdout.dense())
    assert auc_roc(split.holdout.labels, probs[:, 1]) >= 0.99


def test_ranking_baseline_loses_to_trained_model():
    data = make_synthetic(1500, 8, Task.multiclass(5), separation=2.0, seed=4)
    split = stratified_split(data, 0.25, seed=5)

    freqs = class_frequencies(split.train)
    base_probs, _ = baseline_predict(freqs, split.holdout.n_rows, seed=6)
    baseline = evaluate_probs(split.holdout, base_probs, "ndcg@10").value

    hp = HyperParams(
        iterations=40, max_depth=4, objective=MULTICLASS_SOFTMAX, num_classes=5, seed=7
    )
    ensemble, _ = train(split.train, hp)
    trained = evaluate_probs(
        split.holdout, ensemble.predict_proba(split.holdout.dense()), "ndcg@10"
    ).value
    assert trained > baseline


def test_suggestion_invariant_under_affine_score_rescaling():
    space = ParamSpace((Continuous("x", 0, 1), Continuous("y", 0, 1)))
    rng = np.random.default_rng(8)
    points = rng.random((10, 2))
    scores = rng.normal(size=10)

    def trials(ys):
        return [
            TrialRecord(params={"x": float(p[0]), "y": float(p[1])}, validation_score=float(s), train_seconds=0.0)
            for p, s in zip(points, ys)
        ]

    state_a = fit_gp(trials(scores), space)
    state_b = fit_gp(trials(5.0 * scores + 3.0), space)
    pick_a = suggest_next(state_a, space, np.random.default_rng(99))
    pick_b = suggest_next(state_b, space, np.random.default_rng(99))
    np.testing.assert_allclose(pick_a, pick_b, atol=1e-12)


def test_cmd_hpo_beats_random_search_control(tmp_path):
    space_doc = [
        {"name": "iterations", "type": "integer", "lo": 3, "hi": 20},
        {"name": "depth", "type": "integer", "lo": 1, "hi": 4},
        {"name": "regularizer", "type": "continuous", "lo": 0.01, "hi": 100, "scale": "log10"},
        {"name": "learning_rate", "type": "continuous", "lo": 0.05, "hi": 0.6},
    ]
    dataset = {"synthetic": {"n": 240, "m": 3, "task": "binary", "separation": 1.2, "seed": 30}}

    hpo_best, control_best = [], []
    for seed in (1, 2, 3):
        out = tmp_path / f"hpo{seed}"
        cfg = tmp_path / f"hpo{seed}.json"
        cfg.write_text(
            json.dumps(
                {
                    "dataset": dataset,
                    "split": {"fraction": 0.25, "seed": 10},
                    "seed": seed,
                    "budget": 20,
                    "init_count": 6,
                    "search": {"space": space_doc},
                    "out_dir": str(out),
                }
            )
        )
        assert cli_main(["hpo", "--config", str(cfg)]) == 0
        summary = json.loads((out / "hpo_summary.json").read_text())
        hpo_best.append(summary["best_score"])

        # 20-point pure random control on the same space and data: the
        # degenerate init_count == budget loop is exactly random search
        data = make_synthetic(240, 3, Task.binary(), 1.2, seed=30)
        split = stratified_split(data, 0.25, seed=10)
        space = ParamSpace.from_json_obj(space_doc)

        def objective(params):
            hp = HyperParams(
                iterations=params["iterations"],
                max_depth=params["depth"],
                reg_lambda=params["regularizer"],
                learning_rate=params["learning_rate"],
                seed=seed,
            )
            ensemble, _ = train(split.train, hp)
            probs = ensemble.predict_proba(split.holdout.dense())
            return auc_roc(split.holdout.labels, probs[:, 1]), 0.0

        control = run_hpo(space, objective, budget=20, init_count=20, seed=1000 + seed)
        control_best.append(max(r.validation_score for r in control if r.ok))

    assert np.median(hpo_best) >= np.median(control_best)
