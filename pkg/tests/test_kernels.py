import math

import numpy as np
import pytest

from stitkit.errors import MeasureError, OutOfWindowError
from stitkit.geometry import Polytope
from stitkit.kernels import (
    FixedLifetime,
    GammaLifetime,
    KernelSpec,
    UniformLifetime,
    build_features,
    hoeffding_envelope,
    max_kernel_error,
)
from stitkit.measures import from_directions, isotropic, mondrian
from stitkit.stats import binomial_se

SQRT2 = math.sqrt(2.0)
EXAMPLE = [[1.0, 0.0], [0.0, 1.0], [1.0 / SQRT2, 1.0 / SQRT2]]


def unit_box():
    return Polytope.box([0.0, 0.0], [1.0, 1.0])


class TestLimitKernel:
    def test_axis_aligned_value(self):
        spec = KernelSpec(mondrian(2), FixedLifetime(1.0))
        assert spec.evaluate([0.0, 0.0], [0.3, 0.4]) == pytest.approx(math.exp(-0.35))

    def test_isotropic_value(self):
        spec = KernelSpec(isotropic(2), FixedLifetime(1.0))
        assert spec.evaluate([0.0, 0.0], [1.0, 0.0]) == pytest.approx(
            math.exp(-2.0 / math.pi), rel=1e-12
        )

    def test_three_direction_value(self):
        spec = KernelSpec(from_directions(EXAMPLE), FixedLifetime(3.0))
        # projections of e1 on the atoms: 1, 0, 1/sqrt(2)
        assert spec.evaluate([1.0, 0.0], [0.0, 0.0]) == pytest.approx(
            math.exp(-(1.0 + 1.0 / SQRT2)), rel=1e-12
        )

    def test_diagonal(self):
        spec = KernelSpec(from_directions(EXAMPLE), FixedLifetime(2.0))
        assert spec.evaluate([0.2, -0.1], [0.2, -0.1]) == 1.0

    def test_translation_invariance_exact(self):
        spec = KernelSpec(from_directions(EXAMPLE), FixedLifetime(2.0))
        # dyadic coordinates make the float subtraction exact
        x = np.array([0.25, -0.75])
        y = np.array([0.5, 0.125])
        z = np.array([1.5, -2.25])
        assert spec.evaluate(x, y) == spec.evaluate(x + z, y + z)

    def test_strictly_decreasing_along_rays(self):
        for measure in (mondrian(2), from_directions(EXAMPLE), isotropic(2)):
            spec = KernelSpec(measure, FixedLifetime(1.0))
            v = np.array([0.3, 0.7])
            values = [spec.evaluate(np.zeros(2), t * v) for t in (0.5, 1.0, 2.0, 4.0)]
            assert all(a > b for a, b in zip(values, values[1:]))

    def test_gram_matches_pairwise(self):
        spec = KernelSpec(from_directions(EXAMPLE), FixedLifetime(2.0))
        rng = np.random.default_rng(1)
        X = rng.uniform(0, 1, size=(6, 2))
        G = spec.gram(X)
        for i in range(6):
            for j in range(6):
                assert G[i, j] == pytest.approx(spec.evaluate(X[i], X[j]), rel=1e-12)


class TestMixtures:
    def test_gamma_unit_case(self):
        # shape 1, rate 1 at mass 1 halves the kernel
        spec = KernelSpec(mondrian(2), GammaLifetime(1.0, 1.0))
        x, y = np.zeros(2), np.array([1.0, 1.0])  # segment mass 1
        assert spec.evaluate(x, y) == pytest.approx(0.5, rel=1e-12)

    def test_gamma_formula(self):
        lt = GammaLifetime(2.0, 3.0)
        assert lt.laplace_transform(0.35) == pytest.approx((3.0 / 3.35) ** 2, rel=1e-12)

    def test_uniform_limit_at_zero(self):
        lt = UniformLifetime(1.0, 2.0)
        assert lt.laplace_transform(0.0) == pytest.approx(1.0)

    def test_uniform_series_branch_accuracy(self):
        # high-precision oracle across the series/closed-form switch
        import mpmath

        lt = UniformLifetime(1.0, 2.0)
        with mpmath.workdps(50):
            for s in (1e-10, 9.9e-9, 1.01e-8, 1e-6):
                ms = mpmath.mpf(s)
                exact = float(
                    (mpmath.exp(-ms) - mpmath.exp(-2 * ms)) / (ms * mpmath.mpf(1))
                )
                assert lt.laplace_transform(s) == pytest.approx(exact, rel=1e-7)

    def test_uniform_closed_form(self):
        lt = UniformLifetime(1.0, 2.0)
        s = 0.35
        expected = (math.exp(-s) - math.exp(-2 * s)) / s
        assert lt.laplace_transform(s) == pytest.approx(expected, rel=1e-12)

    def test_random_lifetime_ensemble_matches_transform(self):
        spec = KernelSpec(mondrian(2), GammaLifetime(2.0, 3.0))
        window = Polytope.box([-0.5, -0.5], [0.5, 0.5])
        feats = build_features(spec, 3000, window, 50)
        x, y = np.array([0.0, 0.0]), np.array([0.3, 0.4])
        freq = feats.kernel(x, y)
        target = (3.0 / 3.35) ** 2
        assert abs(freq - target) <= 3.0 * binomial_se(target, 3000)

    def test_gamma_approaches_fixed(self):
        # matched-mean gamma lifetimes concentrate on the fixed value
        lam0, s = 2.0, 0.6
        fixed = FixedLifetime(lam0).laplace_transform(s)
        gaps = [
            abs(GammaLifetime(a, a / lam0).laplace_transform(s) - fixed)
            for a in (1.0, 10.0, 100.0)
        ]
        assert gaps[0] > gaps[1] > gaps[2]

    @pytest.mark.parametrize(
        "bad",
        [
            lambda: GammaLifetime(0.0, 1.0),
            lambda: GammaLifetime(1.0, -1.0),
            lambda: UniformLifetime(0.0, 1.0),
            lambda: UniformLifetime(2.0, 1.0),
            lambda: FixedLifetime(-1.0),
        ],
    )
    def test_invalid_parameters(self, bad):
        with pytest.raises(MeasureError):
            bad()


class TestFeatures:
    def test_single_tree_zero_lifetime_is_constant_one(self):
        spec = KernelSpec(mondrian(2), FixedLifetime(0.0))
        feats = build_features(spec, 1, unit_box(), 2)
        rng = np.random.default_rng(3)
        X = rng.uniform(0, 1, size=(10, 2))
        assert np.all(feats.gram(X) == 1.0)

    def test_determinism(self):
        spec = KernelSpec(mondrian(2), FixedLifetime(2.0))
        a = build_features(spec, 20, unit_box(), 4)
        b = build_features(spec, 20, unit_box(), 4)
        X = np.random.default_rng(5).uniform(0, 1, size=(8, 2))
        assert np.array_equal(a.leaf_matrix(X), b.leaf_matrix(X))

    def test_feature_dimension_is_leaf_count(self):
        spec = KernelSpec(mondrian(2), FixedLifetime(2.0))
        feats = build_features(spec, 10, unit_box(), 6)
        assert feats.feature_dimensions() == [t.leaf_count for t in feats.trees]

    def test_kernel_bounds_and_symmetry(self):
        spec = KernelSpec(mondrian(2), FixedLifetime(1.0))
        feats = build_features(spec, 50, unit_box(), 7)
        rng = np.random.default_rng(8)
        for _ in range(10):
            x, y = rng.uniform(0, 1, size=(2, 2))
            k = feats.kernel(x, y)
            assert 0.0 <= k <= 1.0
            assert k == feats.kernel(y, x)
            assert feats.kernel(x, x) == 1.0

    def test_empirical_matches_limit(self):
        spec = KernelSpec(mondrian(2), FixedLifetime(1.0))
        feats = build_features(spec, 4000, Polytope.box([-0.5, -0.5], [0.5, 0.5]), 9)
        x, y = np.array([0.0, 0.0]), np.array([0.3, 0.4])
        target = math.exp(-0.35)
        assert abs(feats.kernel(x, y) - target) <= 3.0 * binomial_se(target, 4000)

    def test_unbiasedness_over_builds(self):
        spec = KernelSpec(mondrian(2), FixedLifetime(1.5))
        window = Polytope.box([-0.5, -0.5], [0.5, 0.5])
        x, y = np.array([0.0, 0.0]), np.array([0.25, -0.2])
        reps, m = 150, 20
        values = [
            build_features(spec, m, window, (10, r)).kernel(x, y) for r in range(reps)
        ]
        target = spec.evaluate(x, y)
        se = binomial_se(target, reps * m)
        assert abs(float(np.mean(values)) - target) <= 3.0 * se

    def test_hoeffding_envelope_frequency(self):
        spec = KernelSpec(mondrian(2), FixedLifetime(1.0))
        window = Polytope.box([-0.5, -0.5], [0.5, 0.5])
        x, y = np.array([0.0, 0.0]), np.array([0.3, 0.4])
        target = spec.evaluate(x, y)
        delta = 0.05
        m = 50
        bound = hoeffding_envelope(m, delta)
        reps = 100
        inside = sum(
            abs(build_features(spec, m, window, (11, r)).kernel(x, y) - target) <= bound
            for r in range(reps)
        )
        assert inside / reps >= 1.0 - delta

    def test_out_of_window(self):
        spec = KernelSpec(mondrian(2), FixedLifetime(1.0))
        feats = build_features(spec, 5, unit_box(), 12)
        with pytest.raises(OutOfWindowError):
            feats.kernel([0.5, 0.5], [1.5, 0.5])

    def test_needs_positive_count(self):
        spec = KernelSpec(mondrian(2), FixedLifetime(1.0))
        with pytest.raises(MeasureError):
            build_features(spec, 0, unit_box(), 13)


class TestGram:
    def test_unit_diagonal_and_symmetry(self):
        spec = KernelSpec(from_directions(EXAMPLE), FixedLifetime(2.0))
        feats = build_features(spec, 100, Polytope.box([-0.5, -0.5], [0.5, 0.5]), 14)
        X = np.random.default_rng(15).uniform(-0.5, 0.5, size=(12, 2))
        G = feats.gram(X)
        assert np.allclose(np.diag(G), 1.0)
        assert np.allclose(G, G.T)
        assert G.min() >= 0.0 and G.max() <= 1.0

    def test_positive_semidefinite(self):
        spec = KernelSpec(mondrian(2), FixedLifetime(2.0))
        for r in range(5):
            feats = build_features(spec, 30, unit_box(), (16, r))
            X = np.random.default_rng(r).uniform(0, 1, size=(20, 2))
            assert np.linalg.eigvalsh(feats.gram(X)).min() >= -1e-9

    def test_frobenius_error_shrinks(self):
        spec = KernelSpec(mondrian(2), FixedLifetime(1.0))
        window = unit_box()
        X = np.random.default_rng(17).uniform(0, 1, size=(15, 2))
        exact = spec.gram(X)
        meds = []
        for m in (10, 100, 1000):
            errs = [
                np.linalg.norm(build_features(spec, m, window, (18, m, r)).gram(X) - exact)
                for r in range(5)
            ]
            meds.append(float(np.median(errs)))
        assert meds[0] > meds[1] > meds[2]


class TestSupError:
    def test_bounded_by_one(self):
        spec = KernelSpec(mondrian(2), FixedLifetime(1.0))
        feats = build_features(spec, 1, unit_box(), 19)
        grid = np.random.default_rng(20).uniform(0, 1, size=(10, 2))
        assert max_kernel_error(feats, spec, grid) <= 1.0

    def test_decreases_in_median(self):
        spec = KernelSpec(mondrian(2), FixedLifetime(1.0))
        g = np.linspace(0.0, 1.0, 5)
        mesh = np.meshgrid(g, g, indexing="ij")
        grid = np.column_stack([m.ravel() for m in mesh])
        meds = []
        for m in (10, 100, 1000):
            errs = [
                max_kernel_error(build_features(spec, m, unit_box(), (21, m, r)), spec, grid)
                for r in range(5)
            ]
            meds.append(float(np.median(errs)))
        assert meds[0] > meds[1] > meds[2]
