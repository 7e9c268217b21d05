import numpy as np
import pytest
from scipy.stats import qmc

from boosthpo.bayesopt import Continuous, Integer, ParamSpace, run_hpo


def quadratic_objective(star):
    def objective(params):
        x = np.array([params["x"], params["y"]])
        return -float(np.sum((x - star) ** 2)), 0.001

    return objective


def space_2d():
    return ParamSpace((Continuous("x", 0, 1), Continuous("y", 0, 1)))


class TestRunHpo:
    def test_exact_budget_and_order(self):
        records = run_hpo(space_2d(), quadratic_objective(np.array([0.4, 0.6])), budget=12, init_count=4, seed=0)
        assert len(records) == 12
        assert all(r.ok for r in records)

    def test_best_so_far_monotone(self):
        records = run_hpo(space_2d(), quadratic_objective(np.array([0.2, 0.8])), budget=15, init_count=5, seed=1)
        best = -np.inf
        for r in records:
            if r.ok:
                best = max(best, r.validation_score)
            assert best >= max(
                (s.validation_score for s in records[: records.index(r) + 1] if s.ok),
                default=-np.inf,
            )

    def test_init_equal_budget_is_pure_latin_hypercube(self):
        space = space_2d()
        records = run_hpo(space, quadratic_objective(np.array([0.5, 0.5])), budget=6, init_count=6, seed=9)
        design = qmc.LatinHypercube(d=2, seed=9).random(6)
        expected = [space.decode(row) for row in design]
        got = [r.params for r in records]
        for e, g in zip(expected, got):
            assert g["x"] == pytest.approx(e["x"])
            assert g["y"] == pytest.approx(e["y"])

    def test_failed_trials_recorded_and_loop_continues(self):
        calls = {"n": 0}

        def flaky(params):
            calls["n"] += 1
            if calls["n"] % 3 == 0:
                raise RuntimeError("synthetic failure")
            return params["x"], 0.001

        records = run_hpo(
            ParamSpace((Continuous("x", 0, 1),)), flaky, budget=10, init_count=3, seed=2
        )
        assert len(records) == 10
        failed = [r for r in records if not r.ok]
        assert failed
        assert all(r.validation_score is None for r in failed)

    def test_all_failures_still_meets_budget(self):
        def broken(params):
            raise RuntimeError("always down")

        records = run_hpo(space_2d(), broken, budget=5, init_count=3, seed=3)
        assert len(records) == 5
        assert all(not r.ok for r in records)

    def test_budget_validation(self):
        with pytest.raises(ValueError):
            run_hpo(space_2d(), quadratic_objective(np.zeros(2)), budget=3, init_count=4)
        with pytest.raises(ValueError):
            run_hpo(space_2d(), quadratic_objective(np.zeros(2)), budget=5, init_count=1)

    def test_callback_sees_every_trial_in_order(self):
        seen = []
        run_hpo(
            space_2d(),
            quadratic_objective(np.array([0.3, 0.3])),
            budget=7,
            init_count=3,
            seed=4,
            callback=lambda i, r: seen.append(i),
        )
        assert seen == list(range(7))

    def test_integer_dimension_suggestions_are_integers(self):
        space = ParamSpace((Integer("k", 1, 50), Continuous("x", 0, 1)))

        def objective(params):
            assert isinstance(params["k"], int)
            return -abs(params["k"] - 25) / 25 - (params["x"] - 0.5) ** 2, 0.001

        records = run_hpo(space, objective, budget=12, init_count=4, seed=5)
        assert all(isinstance(r.params["k"], int) for r in records)

    def test_beats_random_search_on_quadratic(self):
        star = np.array([0.35, 0.65])
        space = space_2d()
        hpo_best, random_best = [], []
        for seed in range(5):
            records = run_hpo(space, quadratic_objective(star), budget=25, init_count=6, seed=seed)
            hpo_best.append(max(r.validation_score for r in records if r.ok))
            rng = np.random.default_rng(10_000 + seed)
            rand_scores = [
                quadratic_objective(star)(space.decode(rng.random(2)))[0] for _ in range(25)
            ]
            random_best.append(max(rand_scores))
        assert np.median(hpo_best) > np.median(random_best)
        assert np.median(hpo_best) >= -1e-2
