import math

import numpy as np
import pytest

import oracles
from conftest import random_distinct_points, rng_for
from fpgeom.energy import (
    NotARectangleError,
    RectangleClass,
    additive_energy,
    classify_rectangle,
    fourier_transform,
    max_on_isotropic_line,
    rectangle_energy_paraboloid,
    rectangle_energy_sphere,
    restriction_ratio,
    slice_energy_sum,
)
from fpgeom.geom import GeometryError
from fpgeom.quadrics import Paraboloid, lines_on_sphere, paraboloid_lift


class TestAdditiveEnergy:
    def test_singleton(self):
        assert additive_energy([(0, 0, 0)], [(0, 0, 0)], 7) == 1

    def test_two_scalars(self):
        A = [(0,), (1,)]
        assert additive_energy(A, A, 5) == 6

    def test_full_line_is_p_cubed(self):
        p = 7
        A = [(x,) for x in range(p)]
        assert additive_energy(A, A, p) == p ** 3

    @pytest.mark.parametrize("seed", range(4))
    def test_matches_quadruple_loop(self, seed):
        rng = rng_for("addenergy", seed)
        p = rng.choice([5, 7])
        A = random_distinct_points(rng, p, 2, rng.randrange(1, 9))
        B = random_distinct_points(rng, p, 2, rng.randrange(1, 9))
        assert additive_energy(A, B, p) == oracles.additive_energy(A, B, p)

    def test_translation_invariance(self):
        p, rng = 11, rng_for("trans")
        A = random_distinct_points(rng, p, 3, 12)
        v = (3, 7, 2)
        shifted = [tuple((c + w) % p for c, w in zip(q, v)) for q in A]
        assert additive_energy(A, A, p) == additive_energy(shifted, shifted, p)


class TestParaboloidEnergy:
    def test_grid_hand_value(self):
        A = paraboloid_lift([(0, 0), (1, 0), (0, 1), (1, 1)], 7)
        rep = rectangle_energy_paraboloid(A, 7)
        assert rep.energy == 36
        assert rep.corner_count == 36
        assert rep.rectangles == 1 and rep.ordinary == 1

    def test_singleton(self):
        rep = rectangle_energy_paraboloid([(2, 3, 2 * 2 + 3 * 3)], 7)
        assert rep.energy == 1 and rep.rectangles == 0

    def test_energy_at_least_size(self):
        rng = rng_for("par-size")
        p = 11
        base = random_distinct_points(rng, p, 2, 20)
        A = paraboloid_lift(base, p)
        rep = rectangle_energy_paraboloid(A, p)
        assert rep.energy >= len(A)

    def test_full_isotropic_line_cubes(self):
        # the full line is sum-closed, so every additive triple closes inside it
        p = 5  # direction (1,2) is isotropic
        base = [(t % p, 2 * t % p) for t in range(p)]
        A = paraboloid_lift(base, p)
        rep = rectangle_energy_paraboloid(A, p)
        assert rep.energy == p ** 3
        assert rep.rectangles > 0
        assert rep.degenerate == rep.rectangles
        assert rep.ordinary == rep.semi_degenerate == 0
        assert rep.k0 == p

    def test_isotropic_line_subset_all_degenerate(self):
        # a proper subset of the line is not sum-closed: the energy drops to
        # the additive-quadruple count of the parameter set, here 52 < 4^3
        p, m = 5, 4
        base = [(t % p, 2 * t % p) for t in range(m)]
        A = paraboloid_lift(base, p)
        rep = rectangle_energy_paraboloid(A, p)
        assert rep.energy == oracles.additive_energy(A, A, p) == 52
        assert rep.rectangles > 0 and rep.degenerate == rep.rectangles
        assert rep.k0 == m

    def test_off_paraboloid_rejected(self):
        with pytest.raises(GeometryError):
            rectangle_energy_paraboloid([(1, 1, 3)], 7)

    @pytest.mark.parametrize("seed", range(4))
    def test_matches_quadruple_loop(self, seed):
        rng = rng_for("par-oracle", seed)
        p = rng.choice([5, 7, 13])
        base = random_distinct_points(rng, p, 2, rng.randrange(1, 11))
        A = paraboloid_lift(base, p)
        rep = rectangle_energy_paraboloid(A, p)
        assert rep.energy == oracles.additive_energy(A, A, p)

    def test_multiplicities_in_range(self):
        rng = rng_for("par-mult")
        p = 13
        base = random_distinct_points(rng, p, 2, 25)
        rep = rectangle_energy_paraboloid(paraboloid_lift(base, p), p)
        if rep.multiplicity_range is not None:
            lo, hi = rep.multiplicity_range
            assert 4 <= lo <= hi <= 16

    def test_class_counts_sum(self):
        rng = rng_for("par-classes")
        p = 5
        base = random_distinct_points(rng, p, 2, 18)
        rep = rectangle_energy_paraboloid(paraboloid_lift(base, p), p)
        assert rep.ordinary + rep.semi_degenerate + rep.degenerate == rep.rectangles


class TestSphereEnergy:
    def test_frame_hand_value(self):
        p = 7
        frame = []
        for i in range(4):
            for s in (1, p - 1):
                v = [0, 0, 0, 0]
                v[i] = s
                frame.append(tuple(v))
        rep = rectangle_energy_sphere(frame, p, 1)
        assert rep.energy == 168
        assert rep.energy == oracles.additive_energy(frame, frame, p)

    def test_singleton(self):
        rep = rectangle_energy_sphere([(1, 0, 0, 0)], 7, 1)
        assert rep.energy == 1

    def test_full_isotropic_line_cubes(self):
        p = 5
        t = next(t for t in range(1, p) if lines_on_sphere(p, 4, t))
        line = lines_on_sphere(p, 4, t)[0]
        A = line.points()
        rep = rectangle_energy_sphere(A, p, t)
        assert rep.energy == p ** 3
        assert rep.degenerate == rep.rectangles > 0
        assert rep.k0 == p

    def test_isotropic_line_subset_all_degenerate(self):
        p = 5
        t = next(t for t in range(1, p) if lines_on_sphere(p, 4, t))
        line = lines_on_sphere(p, 4, t)[0]
        A = line.points()[:4]
        rep = rectangle_energy_sphere(A, p, t)
        assert rep.energy == oracles.additive_energy(A, A, p)
        assert rep.degenerate == rep.rectangles > 0

    def test_off_sphere_rejected(self):
        with pytest.raises(GeometryError):
            rectangle_energy_sphere([(1, 1, 1, 1)], 7, 1)

    def test_degenerate_bound_by_isotropic_line_budget(self):
        # degenerate rectangles need four collinear points of one isotropic line
        p = 5
        t = next(t for t in range(1, p) if lines_on_sphere(p, 4, t))
        pts = lines_on_sphere(p, 4, t)[0].points()[:3]
        rep = rectangle_energy_sphere(pts, p, t)
        iso_lines = 1
        assert rep.degenerate <= iso_lines * rep.k0 ** 3

    @pytest.mark.parametrize("seed", range(5))
    def test_degenerate_budget_random_sets(self, seed):
        from fpgeom.geom import AffineLine, norm_sq, vsub
        from fpgeom.quadrics import sphere_points

        rng = rng_for("deg-budget", seed)
        p = 13
        t = rng.randrange(1, p)
        pool = sphere_points(p, 3, t)
        if len(pool) < 4:
            return
        A = sorted(rng.sample(pool, min(len(pool), 30)))
        rep = rectangle_energy_sphere(A, p, t)
        iso_lines = set()
        for i in range(len(A)):
            for j in range(i + 1, len(A)):
                d = vsub(A[j], A[i], p)
                if norm_sq(d, p) == 0:
                    iso_lines.add(AffineLine(p, A[i], d))
        assert rep.degenerate <= max(1, len(iso_lines)) * rep.k0 ** 3


class TestClassifyRectangle:
    def test_ordinary_square(self):
        # unit square in the plane: diagonals {(0,0),(1,1)} and {(1,0),(0,1)}
        assert (
            classify_rectangle((0, 0), (1, 1), (1, 0), (0, 1), 7)
            == RectangleClass.ORDINARY
        )

    def test_degenerate_collinear_isotropic(self):
        p = 5
        pts = [(t % p, 2 * t % p) for t in range(4)]  # on isotropic direction (1,2)
        x, y, z, u = pts[0], pts[3], pts[1], pts[2]  # x+y == z+u on the line
        assert classify_rectangle(x, y, z, u, p) == RectangleClass.DEGENERATE

    def test_semi_degenerate_cross_lines(self):
        from fpgeom.constructions import cylinder_set

        built = cylinder_set(5, 1, 2, 2)
        rep = rectangle_energy_sphere(built.points, 5, 1)
        assert rep.semi_degenerate >= 1

    def test_not_a_rectangle_errors(self):
        p = 7
        with pytest.raises(NotARectangleError):
            classify_rectangle((0, 0), (1, 0), (0, 1), (1, 1), p)  # sums differ
        with pytest.raises(NotARectangleError):
            classify_rectangle((0, 0), (3, 1), (1, 0), (2, 1), p)  # no right angle
        with pytest.raises(NotARectangleError):
            classify_rectangle((0, 0), (1, 1), (0, 0), (1, 1), p)  # repeated vertex


class TestSliceEnergy:
    def test_single_height_concentration(self):
        p = 7
        pts = [(x, y, 3) for x in range(3) for y in range(2)]
        rep = slice_energy_sum(pts, p)
        assert len(rep.per_height) == 1
        h, e = rep.per_height[0]
        assert h == 3
        assert rep.quarter_power_sum == pytest.approx(e ** 0.25)

    def test_empty(self):
        rep = slice_energy_sum([], 7)
        assert rep.per_height == () and rep.quarter_power_sum == 0.0

    def test_random_slices_match_oracle(self):
        p, rng = 7, rng_for("slices")
        pts = random_distinct_points(rng, p, 3, 25)
        rep = slice_energy_sum(pts, p)
        for h, e in rep.per_height:
            lifted = sorted(
                {(q[0], q[1], (q[0] ** 2 + q[1] ** 2) % p) for q in pts if q[2] == h}
            )
            assert e == oracles.additive_energy(lifted, lifted, p)


class TestRestriction:
    def test_single_point_support_lhs_is_one(self):
        g = {(1, 2, 3): 1.0}
        rep = restriction_ratio(g, 5, 3)
        assert rep.lhs == pytest.approx(1.0, abs=1e-9)
        assert rep.ratio is not None and rep.ratio > 0

    def test_zero_function(self):
        rep = restriction_ratio({}, 5, 3)
        assert rep.lhs == 0.0 and rep.ratio is None

    def test_sup_norm_guard(self):
        with pytest.raises(ValueError):
            restriction_ratio({(0, 0, 0): 2.0}, 5, 3)

    def test_parseval(self):
        import itertools

        p, d, rng = 5, 3, rng_for("parseval")
        support = random_distinct_points(rng, p, d, 40)
        g = {x: complex(rng.uniform(-1, 1) * 0.5, rng.uniform(-1, 1) * 0.5) for x in support}
        all_xi = list(itertools.product(range(p), repeat=d))
        ghat = fourier_transform(g, p, all_xi)
        lhs = float(np.sum(np.abs(ghat) ** 2)) / p ** d
        rhs = sum(abs(v) ** 2 for v in g.values())
        assert lhs == pytest.approx(rhs, abs=1e-9)

    def test_transform_matches_independent_sum(self):
        p, d, rng = 5, 3, rng_for("dft")
        support = random_distinct_points(rng, p, d, 20)
        g = {x: 1.0 if rng.random() < 0.5 else 0.5 for x in support}
        par = Paraboloid(p, d)
        xis = par.points()
        ghat = fourier_transform(g, p, xis)
        for xi, val in zip(xis, ghat):
            assert abs(val - oracles.dft_value(g, xi, p)) < 1e-9

    def test_ratio_positive_for_nonzero_g(self):
        rng = rng_for("ratio")
        for d in (3, 4):
            p = 5
            support = random_distinct_points(rng, p, d, 10)
            g = {x: 1.0 for x in support}
            rep = restriction_ratio(g, p, d)
            assert rep.ratio is not None and rep.ratio > 0
            assert math.isfinite(rep.ratio)


class TestMaxOnIsotropicLine:
    def test_no_null_pairs(self):
        assert max_on_isotropic_line([(0, 0), (1, 0), (0, 1)], 7) == 1

    def test_counts_line_membership(self):
        p = 5
        pts = [(t % p, 2 * t % p) for t in range(3)] + [(1, 0)]
        assert max_on_isotropic_line(pts, p) == 3
