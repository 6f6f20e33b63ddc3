import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stitkit.errors import MeasureError, SamplingError
from stitkit.geometry import Polytope
from stitkit.measures import (
    from_directions,
    isotropic,
    measure_from_spec,
    mondrian,
    unit_ball_volume,
)
from stitkit.stats import chi2_pvalue, ks_uniform_pvalue

from oracles import hit_fraction, regular_polygon

SQRT2 = math.sqrt(2.0)
EXAMPLE = [[1.0, 0.0], [0.0, 1.0], [1.0 / SQRT2, 1.0 / SQRT2]]


def unit_square():
    return Polytope.box([-0.5, -0.5], [0.5, 0.5])


class TestHitMass:
    def test_three_direction_square(self):
        # widths 1, 1, sqrt(2) under uniform weights
        measure = from_directions(EXAMPLE)
        assert measure.hit_mass(unit_square()) == pytest.approx(
            (1.0 + 1.0 + SQRT2) / 3.0, abs=1e-12
        )

    def test_unit_diameter_ball_normalizes_discrete(self):
        ball = Polytope.polygon(regular_polygon(4096))
        for measure in (mondrian(2), from_directions(EXAMPLE)):
            assert measure.hit_mass(ball) == pytest.approx(1.0, abs=1e-6)

    def test_unit_diameter_ball_normalizes_isotropic(self):
        ball = Polytope.polygon(regular_polygon(4096))
        assert isotropic(2).hit_mass(ball) == pytest.approx(1.0, abs=1e-6)

    def test_isotropic_square_matches_circle_quadrature(self):
        # independent oracle: average the width over a dense circle grid
        sq = unit_square()
        theta = 2.0 * np.pi * (np.arange(20000) + 0.5) / 20000
        u = np.column_stack([np.cos(theta), np.sin(theta)])
        widths = np.abs(u) @ (sq.hi - sq.lo)
        oracle = float(widths.mean())
        assert isotropic(2).hit_mass(sq) == pytest.approx(oracle, rel=1e-7)
        assert isotropic(2).hit_mass(sq) == pytest.approx(4.0 / math.pi, rel=1e-12)

    def test_isotropic_3d_quadrature_matches_box_formula(self):
        # the same cube through the exact zonotope path and the quadrature path
        cube = Polytope.box([0.0, 0.0, 0.0], [1.0, 2.0, 0.5])
        exact = isotropic(3).hit_mass(cube)
        oblique = Polytope(3, cube.normals, cube.offsets, vertices=cube.vertices)
        assert not oblique.is_box
        assert isotropic(3).hit_mass(oblique) == pytest.approx(exact, rel=1e-4)

    def test_isotropic_high_dim_oblique_unsupported(self):
        box = Polytope.box([0.0] * 4, [1.0] * 4)
        oblique = Polytope(4, box.normals, box.offsets, vertices=box.vertices)
        with pytest.raises(MeasureError):
            isotropic(4).hit_mass(oblique)


class TestSegmentMass:
    def test_axis_aligned(self):
        assert mondrian(2).segment_mass([0.0, 0.0], [0.3, 0.4]) == pytest.approx(0.35)

    def test_axis_aligned_vs_hit_counting(self):
        measure = mondrian(2)
        window = unit_square()
        est, se = hit_fraction(measure, window, [0.0, 0.0], [0.3, 0.4], 40_000, seed=2)
        expected = 0.35 / measure.hit_mass(window)
        assert abs(est - expected) <= 3.0 * se

    def test_isotropic_unit_distance(self):
        value = isotropic(2).segment_mass([0.0, 0.0], [1.0, 0.0])
        assert value == pytest.approx(2.0 / math.pi, rel=1e-12)
        # oracle: average |<u, e1>| over the circle
        theta = 2.0 * np.pi * (np.arange(20000) + 0.5) / 20000
        assert value == pytest.approx(float(np.abs(np.cos(theta)).mean()), rel=1e-7)

    def test_coincident_points(self):
        assert from_directions(EXAMPLE).segment_mass([0.2, 0.1], [0.2, 0.1]) == 0.0

    @given(st.integers(0, 10_000))
    @settings(max_examples=40, deadline=None)
    def test_seminorm_properties(self, seed):
        rng = np.random.default_rng(seed)
        measure = from_directions(EXAMPLE)
        x, y, z = rng.uniform(-2, 2, size=(3, 2))
        c = float(rng.uniform(-3, 3))
        lhs = measure.segment_mass(x, z)
        assert lhs <= measure.segment_mass(x, y) + measure.segment_mass(y, z) + 1e-12
        origin = np.zeros(2)
        assert measure.segment_mass(origin, c * x) == pytest.approx(
            abs(c) * measure.segment_mass(origin, x), rel=1e-12, abs=1e-15
        )


class TestSampleCut:
    def test_direction_frequencies(self):
        measure = from_directions(EXAMPLE)
        window = unit_square()
        rng = np.random.default_rng(5)
        n = 50_000
        counts = np.zeros(3)
        for _ in range(n):
            plane = measure.sample_cut(window, rng)
            i = int(np.argmax(np.abs(measure.directions @ plane.normal)))
            counts[i] += 1
        probs = np.array([1.0, 1.0, SQRT2]) / (2.0 + SQRT2)
        for i in range(3):
            se = math.sqrt(probs[i] * (1 - probs[i]) / n)
            assert abs(counts[i] / n - probs[i]) <= 3.0 * se

    def test_diagonal_displacement_uniform(self):
        measure = from_directions(EXAMPLE)
        window = unit_square()
        rng = np.random.default_rng(6)
        displacements = []
        while len(displacements) < 10_000:
            plane = measure.sample_cut(window, rng)
            if abs(float(plane.normal @ measure.directions[2])) > 1.0 - 1e-9:
                displacements.append(plane.offset)
        p = ks_uniform_pvalue(displacements, -1.0 / SQRT2, 1.0 / SQRT2)
        assert p >= 0.01

    def test_sampled_planes_always_split(self):
        rng = np.random.default_rng(7)
        for measure in (mondrian(2), from_directions(EXAMPLE), isotropic(2)):
            body = unit_square()
            for _ in range(300):
                plane = measure.sample_cut(body, rng)
                low, high = body.split(plane)  # must not raise
                body = low if low.volume >= high.volume else high
                if body.volume < 1e-3:  # restart at realistic cell sizes
                    body = unit_square()

    def test_nested_box_hit_rates(self):
        # chi-squared on the rings between nested boxes at the 1% level
        measure = from_directions(EXAMPLE)
        window = unit_square()
        nested = [window] + [
            Polytope.box([-r, -r], [r, r]) for r in (0.35, 0.2, 0.1)
        ]
        masses = np.array([measure.hit_mass(b) for b in nested])
        ring_probs = np.append(-np.diff(masses), masses[-1]) / masses[0]
        rng = np.random.default_rng(8)
        n = 30_000
        counts = np.zeros(len(nested))
        for _ in range(n):
            plane = measure.sample_cut(window, rng)
            deepest = 0
            for k, body in enumerate(nested):
                s = body.vertices @ plane.normal - plane.offset
                if s.min() < 0.0 < s.max():
                    deepest = k
                else:
                    break
            counts[deepest] += 1
        assert chi2_pvalue(counts, n * ring_probs) >= 0.01

    def test_isotropic_zero_diameter_rejected(self):
        point = Polytope(2, np.eye(2), np.zeros(2), vertices=np.zeros((1, 2)))
        rng = np.random.default_rng(9)
        with pytest.raises(SamplingError):
            isotropic(2).sample_cut(point, rng)

    def test_discrete_zero_extent_rejected(self):
        point = Polytope(2, np.eye(2), np.zeros(2), vertices=np.zeros((1, 2)))
        rng = np.random.default_rng(9)
        with pytest.raises(SamplingError):
            mondrian(2).sample_cut(point, rng)


class TestZonoid:
    def test_axis_aligned_axis_value(self):
        summary = mondrian(2).zonoid(2.0)
        assert summary.evaluator(np.array([1.0, 0.0])) == pytest.approx(0.5)

    def test_isotropic_constant(self):
        summary = isotropic(2).zonoid(3.0)
        expected = 3.0 * unit_ball_volume(1) / (2.0 * unit_ball_volume(2))
        assert summary.hmin == pytest.approx(expected, rel=1e-12)
        assert summary.hmax == pytest.approx(expected, rel=1e-12)

    def test_extremes_bound_evaluator(self):
        rng = np.random.default_rng(10)
        summary = from_directions(EXAMPLE).zonoid(2.0)
        for _ in range(1000):
            v = rng.standard_normal(2)
            v /= np.linalg.norm(v)
            value = summary.evaluator(v)
            assert summary.hmin - 1e-9 <= value <= summary.hmax + 1e-9

    def test_axis_aligned_extremes(self):
        summary = mondrian(2).zonoid(2.0)
        assert summary.hmin == pytest.approx(0.5, rel=1e-4)
        assert summary.hmax == pytest.approx(0.5 * SQRT2, rel=1e-4)

    def test_three_dim_extremes_estimate(self):
        summary = mondrian(3).zonoid(3.0)
        # per-axis value 0.5, diagonal value 0.5 * sqrt(3)
        assert summary.hmin == pytest.approx(0.5, rel=0.05)
        assert summary.hmax == pytest.approx(0.5 * math.sqrt(3.0), rel=0.05)


class TestConstructors:
    def test_mondrian_atoms(self):
        m = mondrian(2)
        assert np.array_equal(m.directions, np.eye(2))
        assert np.allclose(m.weights, 0.5)

    def test_uniform_weights(self):
        m = from_directions(EXAMPLE)
        assert np.allclose(m.weights, 1.0 / 3.0)

    def test_isotropic_normalization(self):
        ball = Polytope.polygon(regular_polygon(4096))
        assert isotropic(2).hit_mass(ball) == pytest.approx(1.0, abs=1e-6)

    def test_non_spanning_rejected(self):
        with pytest.raises(MeasureError):
            from_directions([[1.0, 0.0], [-1.0, 0.0]])

    def test_non_unit_rejected(self):
        with pytest.raises(MeasureError):
            from_directions([[1.0, 1.0], [0.0, 1.0]])

    def test_bad_weights_rejected(self):
        with pytest.raises(MeasureError):
            from_directions(np.eye(2), weights=[0.9, 0.3])
        with pytest.raises(MeasureError):
            from_directions(np.eye(2), weights=[1.0, -0.0001])

    def test_weighted_atoms_accepted(self):
        m = from_directions(np.eye(2), weights=[0.25, 0.75])
        sq = unit_square()
        assert m.hit_mass(sq) == pytest.approx(1.0)
        assert m.segment_mass([0.0, 0.0], [1.0, 1.0]) == pytest.approx(1.0)


class TestWireFormat:
    @pytest.mark.parametrize(
        "spec",
        [
            {"kind": "mondrian", "d": 2},
            {"kind": "isotropic", "d": 3},
            {"kind": "directions", "vectors": EXAMPLE},
            {"kind": "directions", "vectors": np.eye(2).tolist(), "weights": [0.25, 0.75]},
        ],
    )
    def test_round_trip(self, spec):
        measure = measure_from_spec(spec)
        again = measure_from_spec(measure.to_spec())
        assert again.kind == measure.kind
        assert again.dim == measure.dim
        if measure.kind == "discrete":
            assert np.allclose(again.directions, measure.directions)
            assert np.allclose(again.weights, measure.weights)

    def test_mondrian_spec_is_canonical(self):
        assert measure_from_spec({"kind": "mondrian", "d": 2}).to_spec() == {
            "kind": "mondrian",
            "d": 2,
        }

    @pytest.mark.parametrize(
        "bad",
        [
            {},
            {"kind": "nope"},
            {"kind": "mondrian"},
            {"kind": "mondrian", "d": 0},
            {"kind": "directions"},
            "mondrian",
        ],
    )
    def test_invalid_specs(self, bad):
        with pytest.raises(MeasureError):
            measure_from_spec(bad)
