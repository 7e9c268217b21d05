import numpy as np
import pytest

from boosthpo.orchestrator import Grid, enumerate_grid


class TestProfiles:
    def test_xgb_like_count(self):
        assert len(enumerate_grid("xgb-like")) == 240

    def test_lgbm_like_count(self):
        assert len(enumerate_grid("lgbm-like")) == 480

    def test_cat_like_count(self):
        assert len(enumerate_grid("cat-like")) == 120

    def test_cat_profile_has_no_feature_fraction_axis(self):
        grid = Grid.for_profile("cat-like")
        assert "feature_fraction" not in grid.names
        assert all(hp.feature_fraction == 1.0 for hp in enumerate_grid("cat-like"))

    def test_axis_values_match_declared_ranges(self):
        hps = enumerate_grid("lgbm-like")
        assert sorted({hp.iterations for hp in hps}) == [40, 80, 160, 320, 480]
        assert sorted({hp.max_depth for hp in hps}) == [4, 8, 10, 12]
        assert sorted({hp.reg_lambda for hp in hps}) == [0.0, 1.0, 100.0]
        assert sorted({hp.learning_rate for hp in hps}) == [0.1, 0.3]
        assert sorted({hp.feature_fraction for hp in hps}) == [0.8, 1.0]
        assert sorted({hp.boosting for hp in hps}) == ["gbdt", "goss"]

    def test_unknown_profile(self):
        with pytest.raises(ValueError):
            Grid.for_profile("mystery")


class TestEnumerationOrder:
    def test_row_major_last_axis_fastest(self):
        grid = Grid(axes=(("a", (1, 2)), ("b", (10, 20, 30))))
        combos = [(x["a"], x["b"]) for x in grid.assignments()]
        assert combos == [(1, 10), (1, 20), (1, 30), (2, 10), (2, 20), (2, 30)]

    def test_deterministic(self):
        a = [hp.to_dict() for hp in enumerate_grid("xgb-like")]
        b = [hp.to_dict() for hp in enumerate_grid("xgb-like")]
        assert a == b

    def test_partition_merge_is_identity(self):
        grid = Grid.for_profile("cat-like")
        size = grid.size
        for workers in (1, 3, 7):
            parts = np.array_split(np.arange(size), workers)
            merged = np.concatenate(parts)
            np.testing.assert_array_equal(merged, np.arange(size))
