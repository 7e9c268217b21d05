import numpy as np
import pytest

from boosthpo.errors import BadRates
from boosthpo.gbdt import goss_sample


class TestGossSample:
    def test_full_top_rate_keeps_everything(self):
        g = np.random.default_rng(0).normal(size=37)
        rows, mult = goss_sample(np.abs(g), a=1.0, b=0.1, rng=1)
        np.testing.assert_array_equal(rows, np.arange(37))
        np.testing.assert_array_equal(mult, np.ones(37))

    def test_counts_and_multiplier(self):
        g = np.random.default_rng(1).normal(size=100)
        rows, mult = goss_sample(np.abs(g), a=0.2, b=0.1, rng=2)
        assert rows.size == 30
        assert np.sum(mult == 1.0) == 20
        assert np.sum(np.isclose(mult, 8.0)) == 10
        # the multiplier-1 rows are exactly the 20 largest |g|
        top20 = set(np.argsort(-np.abs(g), kind="stable")[:20].tolist())
        assert set(rows[mult == 1.0].tolist()) == top20

    def test_rows_ascending_and_unique(self):
        g = np.random.default_rng(2).normal(size=55)
        rows, _ = goss_sample(np.abs(g), a=0.3, b=0.2, rng=3)
        assert np.all(np.diff(rows) > 0)

    def test_deterministic_per_seed(self):
        g = np.abs(np.random.default_rng(3).normal(size=64))
        a1 = goss_sample(g, 0.2, 0.1, rng=42)
        a2 = goss_sample(g, 0.2, 0.1, rng=42)
        b = goss_sample(g, 0.2, 0.1, rng=43)
        np.testing.assert_array_equal(a1[0], a2[0])
        np.testing.assert_array_equal(a1[1], a2[1])
        assert not np.array_equal(a1[0], b[0])

    def test_bad_rates(self):
        g = np.ones(10)
        with pytest.raises(BadRates):
            goss_sample(g, a=-0.1, b=0.1, rng=0)
        with pytest.raises(BadRates):
            goss_sample(g, a=0.2, b=0.0, rng=0)
        with pytest.raises(BadRates):
            goss_sample(g, a=0.5, b=0.6, rng=0)

    def test_reweighted_gradient_sum_is_unbiased(self):
        rng = np.random.default_rng(7)
        g = rng.normal(size=200)
        true_sum = g.sum()
        draws = 10_000
        estimates = np.empty(draws)
        for i in range(draws):
            rows, mult = goss_sample(np.abs(g), a=0.2, b=0.1, rng=1000 + i)
            estimates[i] = float(np.sum(mult * g[rows]))
        stderr = estimates.std(ddof=1) / np.sqrt(draws)
        assert abs(estimates.mean() - true_sum) <= 3 * stderr
