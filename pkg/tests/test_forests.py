import math

import numpy as np
import pytest
from scipy.integrate import quad

from stitkit.data import gaussian_pdf, gaussian_sample, mixture_pdf, mixture_sample
from stitkit.errors import InvalidBodyError, OutOfWindowError
from stitkit.forests import (
    DensityForest,
    RegressionForest,
    infinite_forest_density,
    l1_error,
    l2_error,
    laplace_kde,
    stit_forest_kernel_estimate,
)
from stitkit.geometry import Polytope
from stitkit.measures import from_directions, mondrian
from stitkit.special import kernel_correction, mondrian_forest_kernel

SQRT2 = math.sqrt(2.0)
E1_AT_ONE = 0.21938393439552026


def interval(a=-6.0, b=6.0):
    return Polytope.interval(a, b)


class TestDensityForest:
    def test_uncut_forest_is_uniform(self):
        window = Polytope.box([0.0, 0.0], [1.0, 1.0])
        data = np.array([[0.2, 0.3], [0.7, 0.6]])
        forest = DensityForest.build(mondrian(2), 1e-9, window, data, 1, 1)
        assert forest.trees[0].leaf_count == 1
        grid = np.array([[0.1, 0.1], [0.9, 0.4]])
        assert np.allclose(forest.density(grid), 1.0)

    def test_window_integral_is_one(self):
        rng = np.random.default_rng(2)
        data = rng.standard_normal(300)
        forest = DensityForest.build(mondrian(1), 6.0, interval(), data, 40, 3)
        total, per_tree = forest.window_integral()
        assert total == pytest.approx(1.0, abs=1e-9)
        assert np.abs(per_tree - 1.0).max() <= 1e-9

    def test_density_nonnegative(self):
        rng = np.random.default_rng(4)
        data = rng.standard_normal(100)
        forest = DensityForest.build(mondrian(1), 4.0, interval(), data, 20, 5)
        grid = np.linspace(-5, 5, 50)[:, None]
        assert np.all(forest.density(grid) >= 0.0)

    def test_matches_infinite_tree_form_within_se(self):
        rng = np.random.default_rng(6)
        data = rng.standard_normal(200)
        lam = 5.0
        forest = DensityForest.build(mondrian(1), lam, interval(-5, 5), data, 800, 7)
        pts = np.array([[-1.5], [0.0], [0.8], [2.0]])  # all > 5/lam from the boundary
        vals = forest.density(pts)
        ses = forest.density_se(pts)
        ideal = infinite_forest_density(data, lam, pts)
        assert np.all(np.abs(vals - ideal) <= 3.5 * ses)

    def test_ratio_density_single_point(self):
        # with one data point at the query, the numerator is identically one
        window = interval(-2.0, 2.0)
        data = np.array([[0.25]])
        forest = DensityForest.build(mondrian(1), 3.0, window, data, 200, 8)
        x = np.array([[0.25]])
        vols = []
        for m, tree in enumerate(forest.trees):
            idx = tree.leaf_indices(x)
            vols.append(forest._volumes[m][idx[0]])
        assert forest.ratio_density(x)[0] == pytest.approx(1.0 / np.mean(vols), rel=1e-12)

    def test_single_tree_ratio_reduces_to_density(self):
        # with one tree the averaged indicator over the averaged volume is
        # exactly count / (n * volume); ensembles break the identity
        window = interval(-2.0, 2.0)
        grid = np.linspace(-1, 1, 9)[:, None]
        data = np.array([[-0.5], [0.5]])
        one = DensityForest.build(mondrian(1), 3.0, window, data, 1, 30)
        assert np.allclose(one.ratio_density(grid), one.density(grid))
        many = DensityForest.build(mondrian(1), 3.0, window, data, 40, 31)
        assert not np.allclose(many.ratio_density(grid), many.density(grid))

    def test_ratio_density_approaches_laplace(self):
        rng = np.random.default_rng(9)
        data = rng.standard_normal(400)
        lam = 5.0
        forest = DensityForest.build(mondrian(1), lam, interval(), data, 1000, 10)
        grid = np.linspace(-2, 2, 21)[:, None]
        lap = laplace_kde(data, lam, grid)
        err_small = np.abs(forest.ratio_density(grid, max_trees=100) - lap).mean()
        err_large = np.abs(forest.ratio_density(grid) - lap).mean()
        assert err_large < err_small

    def test_data_outside_window_rejected(self):
        with pytest.raises(OutOfWindowError):
            DensityForest.build(mondrian(1), 2.0, interval(-1, 1), np.array([3.0]), 5, 11)

    def test_empty_data_rejected(self):
        with pytest.raises(InvalidBodyError):
            DensityForest.build(mondrian(1), 2.0, interval(), np.empty(0), 5, 12)

    def test_oblique_measure_forest_normalizes(self):
        window = Polytope.box([-0.5, -0.5], [0.5, 0.5])
        rng = np.random.default_rng(13)
        data = rng.uniform(-0.5, 0.5, size=(100, 2))
        measure = from_directions(
            [[1.0, 0.0], [0.0, 1.0], [1.0 / SQRT2, 1.0 / SQRT2]]
        )
        forest = DensityForest.build(measure, 2.0, window, data, 20, 14)
        total, per_tree = forest.window_integral()
        assert total == pytest.approx(1.0, abs=1e-9)


class TestRegressionForest:
    def test_constant_responses(self):
        rng = np.random.default_rng(15)
        X = rng.uniform(0, 1, size=(50, 1))
        forest = RegressionForest.build(
            mondrian(1), 5.0, interval(0, 1), X, np.full(50, 3.25), 30, 16
        )
        grid = np.linspace(0, 1, 11)[:, None]
        assert np.allclose(forest.predict(grid), 3.25)

    def test_uncut_tree_returns_global_mean(self):
        X = np.array([[0.1], [0.9]])
        y = np.array([1.0, 3.0])
        forest = RegressionForest.build(mondrian(1), 1e-9, interval(0, 1), X, y, 1, 17)
        assert forest.trees[0].leaf_count == 1
        assert forest.predict(np.array([[0.5]]))[0] == pytest.approx(2.0)

    def test_bounded_by_response_range(self):
        rng = np.random.default_rng(18)
        X = rng.uniform(0, 1, size=(200, 1))
        y = np.sin(2 * np.pi * X[:, 0])
        forest = RegressionForest.build(mondrian(1), 4.0, interval(0, 1), X, y, 25, 19)
        pred = forest.predict(np.linspace(0, 1, 31)[:, None])
        assert pred.min() >= y.min() - 1e-12
        assert pred.max() <= y.max() + 1e-12

    def test_learns_sine_reasonably(self):
        rng = np.random.default_rng(20)
        X = rng.uniform(0, 1, size=(2000, 1))
        y = np.sin(2 * np.pi * X[:, 0]) + 0.1 * rng.standard_normal(2000)
        forest = RegressionForest.build(mondrian(1), 12.0, interval(0, 1), X, y, 50, 21)
        grid = np.linspace(0, 1, 101)
        err = l2_error(forest.predict(grid[:, None]), np.sin(2 * np.pi * grid), grid)
        assert err < 0.1

    def test_response_shape_mismatch(self):
        with pytest.raises(InvalidBodyError):
            RegressionForest.build(
                mondrian(1), 2.0, interval(0, 1), np.array([[0.5]]), np.array([1.0, 2.0]), 5, 22
            )

    def test_nonfinite_response_rejected(self):
        with pytest.raises(InvalidBodyError):
            RegressionForest.build(
                mondrian(1), 2.0, interval(0, 1), np.array([[0.5]]), np.array([np.nan]), 5, 23
            )


class TestClosedFormEstimators:
    def test_single_point_peak(self):
        # at the data point the kernel factor is one
        data = np.array([[0.4]])
        lam = 3.0
        assert infinite_forest_density(data, lam, np.array([[0.4]]))[0] == pytest.approx(lam)

    def test_unit_distance_value_from_oracle(self):
        data = np.array([[0.0]])
        x = np.array([[1.0]])
        expected = math.exp(-1.0) * (1.0 - math.e * E1_AT_ONE)
        assert infinite_forest_density(data, 1.0, x)[0] == pytest.approx(expected, rel=1e-12)

    def test_integrates_to_one(self):
        rng = np.random.default_rng(24)
        data = rng.standard_normal(5)
        lam = 2.0
        lo, hi = data.min() - 40 / lam, data.max() + 40 / lam
        val, _ = quad(
            lambda t: infinite_forest_density(data, lam, np.array([[t]]))[0],
            lo,
            hi,
            points=sorted(data.tolist()),
            limit=400,
            epsabs=1e-10,
            epsrel=1e-10,
        )
        assert val == pytest.approx(1.0, abs=1e-8)

    def test_laplace_kde_integrates_to_one(self):
        rng = np.random.default_rng(25)
        data = rng.standard_normal(4)
        lam = 3.0
        lo, hi = data.min() - 40 / lam, data.max() + 40 / lam
        val, _ = quad(
            lambda t: laplace_kde(data, lam, np.array([[t]]))[0],
            lo,
            hi,
            points=sorted(data.tolist()),
            limit=400,
            epsabs=1e-10,
            epsrel=1e-10,
        )
        assert val == pytest.approx(1.0, abs=1e-8)

    def test_laplace_kde_single_point_peak(self):
        data = np.array([[0.3]])
        assert laplace_kde(data, 2.0, np.array([[0.3]]))[0] == pytest.approx(1.0)

    def test_forest_kernel_dominated_by_laplace(self):
        rng = np.random.default_rng(26)
        data = rng.standard_normal((20, 2))
        lam = 2.0
        grid = rng.uniform(-3, 3, size=(50, 2))
        ideal = infinite_forest_density(data, lam, grid)
        lap = laplace_kde(data, lam, grid)
        assert np.all(ideal <= 2**2 * lap + 1e-12)

    def test_far_field_ratio_bound(self):
        # far from every data point the correction factors cap the ratio
        data = np.array([[0.0], [0.5]])
        lam = 4.0
        x = np.array([[4.0]])  # lam * distance >= 10 for both points
        ideal = infinite_forest_density(data, lam, x)[0]
        lap = laplace_kde(data, lam, x)[0]
        caps = [
            float(np.prod(kernel_correction(lam * np.abs(x[0] - p)))) for p in data
        ]
        assert ideal / lap <= 2.0 * max(caps) + 1e-12

    def test_invalid_bandwidth(self):
        with pytest.raises(InvalidBodyError):
            infinite_forest_density(np.array([[0.0]]), 0.0, np.array([[0.0]]))
        with pytest.raises(InvalidBodyError):
            laplace_kde(np.array([[0.0]]), -2.0, np.array([[0.0]]))


class TestGeneralMeasureKernelEstimate:
    def test_matches_axis_aligned_closed_form(self):
        x = np.array([0.5, 0.5])
        est = stit_forest_kernel_estimate(
            mondrian(2), x, tree_count=1000, seed=27, window_halfwidth=4.0
        )
        assert est == pytest.approx(mondrian_forest_kernel(x), abs=0.035)

    def test_runs_for_oblique_measures(self):
        measure = from_directions(
            [[1.0, 0.0], [0.0, 1.0], [1.0 / SQRT2, 1.0 / SQRT2]]
        )
        est = stit_forest_kernel_estimate(
            measure, np.array([0.4, 0.2]), tree_count=150, seed=32, window_halfwidth=3.0
        )
        assert 0.0 <= est < 4.0  # no closed form is claimed, only sanity


class TestErrorNorms:
    def test_zero_for_equal_inputs(self):
        grid = np.linspace(0, 1, 11)
        vals = np.sin(grid)
        assert l1_error(vals, vals, grid) == 0.0
        assert l2_error(vals, vals, grid) == 0.0

    def test_constant_shift(self):
        grid = np.linspace(0.0, 2.0, 41)
        est = np.ones_like(grid) * 1.3
        truth = np.ones_like(grid)
        assert l1_error(est, truth, grid) == pytest.approx(0.3 * 2.0, rel=1e-12)
        assert l2_error(est, truth, grid) == pytest.approx(0.3 * math.sqrt(2.0), rel=1e-12)

    def test_consistency_trend_small(self):
        errs = []
        for n in (200, 2000):
            lam = float(n) ** (1.0 / 3.0)
            data = gaussian_sample(n, 1, np.random.default_rng((28, n)))
            forest = DensityForest.build(mondrian(1), lam, interval(), data, 25, (28, n))
            grid = np.linspace(-4, 4, 81)
            errs.append(
                l1_error(forest.density(grid[:, None]), gaussian_pdf(grid[:, None]), grid)
            )
        assert errs[1] < errs[0]

    def test_bad_grid(self):
        with pytest.raises(InvalidBodyError):
            l1_error([1.0, 2.0], [1.0, 2.0], [1.0, 1.0])


class TestMixtureGenerator:
    def test_mixture_pdf_integrates_to_one(self):
        grid = np.linspace(-8, 8, 2001)
        mass = np.trapezoid(mixture_pdf(grid[:, None]), grid)
        assert mass == pytest.approx(1.0, abs=1e-6)

    def test_mixture_sample_within_window(self):
        pts = mixture_sample(500, 1, np.random.default_rng(29))
        assert np.abs(pts).max() < 6.0
