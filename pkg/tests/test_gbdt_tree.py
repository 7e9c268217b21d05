import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import oracle_grow, random_tree_instance as random_instance

from boosthpo.gbdt import HyperParams, build_bins, grow_tree, split_gain


def node_rows(binned, nested, rows):
    """Yield (nested node, row ids) pairs walking a serialized tree."""
    yield nested, rows
    if "value" not in nested:
        mask = binned.codes[rows, nested["feature"]] <= nested["threshold_bin"]
        yield from node_rows(binned, nested["left"], rows[mask])
        yield from node_rows(binned, nested["right"], rows[~mask])


class TestSplitGain:
    def test_zero_gradients(self):
        assert split_gain(0, 1, 0, 1, 0.0) == 0.0

    def test_forced_arithmetic(self):
        assert split_gain(2, 1, -2, 1, 0.0) == pytest.approx(4.0)

    def test_monotone_in_lambda(self):
        low = split_gain(3, 2, -1, 4, 0.0)
        high = split_gain(3, 2, -1, 4, 100.0)
        assert high < low

    @given(
        gl=st.floats(-50, 50),
        hl=st.floats(0.01, 50),
        gr=st.floats(-50, 50),
        hr=st.floats(0.01, 50),
    )
    @settings(max_examples=200, deadline=None)
    def test_nonnegative_without_regularizer(self, gl, hl, gr, hr):
        assert split_gain(gl, hl, gr, hr, 0.0) >= -1e-9


class TestGrowTree:
    def test_depth_zero_single_leaf(self):
        rng = np.random.default_rng(0)
        binned, g, h, hp = random_instance(rng)
        hp = HyperParams(**{**hp.to_dict(), "max_depth": 0})
        tree = grow_tree(binned, g, h, np.arange(binned.n_rows), hp)
        assert tree.n_nodes == 1
        expected = -g.sum() / (h.sum() + hp.reg_lambda) * hp.learning_rate
        assert tree.value[0] == pytest.approx(expected)

    def test_zero_gradients_single_leaf_value_zero(self):
        raw = np.arange(10, dtype=float)[:, None]
        binned = build_bins(raw, 8)
        g = np.zeros(10)
        h = np.ones(10)
        hp = HyperParams(iterations=1, max_depth=3, reg_lambda=0.0)
        tree = grow_tree(binned, g, h, np.arange(10), hp)
        assert tree.n_nodes == 1
        assert tree.value[0] == 0.0

    @pytest.mark.parametrize("seed", range(8))
    def test_matches_exhaustive_oracle(self, seed):
        rng = np.random.default_rng(100 + seed)
        for _ in range(10):
            binned, g, h, hp = random_instance(rng)
            rows = np.arange(binned.n_rows)
            tree = grow_tree(binned, g, h, rows, hp)
            expected = oracle_grow(
                binned,
                g,
                h,
                rows,
                hp.max_depth,
                hp.reg_lambda,
                hp.learning_rate,
                np.arange(binned.n_features),
            )
            assert tree.to_nested() == expected

    def test_oracle_with_zero_hessian_rows(self):
        rng = np.random.default_rng(77)
        for _ in range(20):
            binned, g, h, hp = random_instance(rng, allow_zero_hessian=True)
            rows = np.arange(binned.n_rows)
            tree = grow_tree(binned, g, h, rows, hp)
            expected = oracle_grow(
                binned, g, h, rows, hp.max_depth, hp.reg_lambda, hp.learning_rate,
                np.arange(binned.n_features),
            )
            assert tree.to_nested() == expected

    def test_feature_subset_restricts_splits(self):
        rng = np.random.default_rng(5)
        n = 40
        raw = np.column_stack([rng.integers(0, 6, n), rng.integers(0, 6, n)]).astype(float)
        binned = build_bins(raw, 8)
        g = rng.integers(-5, 6, n).astype(float)
        h = np.ones(n)
        hp = HyperParams(iterations=1, max_depth=2, feature_fraction=0.5, seed=3)
        tree = grow_tree(binned, g, h, np.arange(n), hp, np.random.default_rng(3))
        used = {f for f in tree.feature if f >= 0}
        assert len(used) <= 1  # half of two features

    def test_every_internal_node_has_positive_gain(self):
        rng = np.random.default_rng(6)
        for _ in range(10):
            binned, g, h, hp = random_instance(rng)
            rows = np.arange(binned.n_rows)
            tree = grow_tree(binned, g, h, rows, hp)
            for node, sub in node_rows(binned, tree.to_nested(), rows):
                if "value" in node:
                    continue
                mask = binned.codes[sub, node["feature"]] <= node["threshold_bin"]
                left, right = sub[mask], sub[~mask]
                gain = split_gain(
                    float(g[left].sum()),
                    float(h[left].sum()),
                    float(g[right].sum()),
                    float(h[right].sum()),
                    hp.reg_lambda,
                )
                assert gain > 0

    def test_histogram_additivity_identity(self):
        # integer-valued gradients make float accumulation exact, so the
        # parent = left + right histogram identity holds exactly
        rng = np.random.default_rng(8)
        binned, g, h, hp = random_instance(rng)
        rows = np.arange(binned.n_rows)
        tree = grow_tree(binned, g, h, rows, hp)

        def hist(rows, f, used):
            codes = binned.codes[rows, f]
            return (
                np.bincount(codes, weights=g[rows], minlength=used),
                np.bincount(codes, weights=h[rows], minlength=used),
            )

        for node, sub in node_rows(binned, tree.to_nested(), rows):
            if "value" in node:
                continue
            mask = binned.codes[sub, node["feature"]] <= node["threshold_bin"]
            for f in range(binned.n_features):
                used = int(binned.num_bins_used[f])
                pg, ph = hist(sub, f, used)
                lg, lh = hist(sub[mask], f, used)
                rg, rh = hist(sub[~mask], f, used)
                np.testing.assert_array_equal(pg, lg + rg)
                np.testing.assert_array_equal(ph, lh + rh)

    def test_depth_never_exceeds_limit(self):
        rng = np.random.default_rng(9)
        for _ in range(10):
            binned, g, h, hp = random_instance(rng)
            tree = grow_tree(binned, g, h, np.arange(binned.n_rows), hp)
            assert tree.depth() <= hp.max_depth
