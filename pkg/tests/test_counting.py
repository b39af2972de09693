import pytest

import oracles
from conftest import random_distinct_points, random_raw_lines, random_raw_planes, rng_for
from fpgeom.counting import (
    WeightedPlaneSet,
    WeightedPointSet,
    count_point_line_2d,
    count_point_line_2d_naive,
    count_point_plane,
    count_point_plane_naive,
    count_restricted,
    max_collinear,
    rich_lines,
    spanned_lines,
)
from fpgeom.geom import AffineLine, AffinePlane, DimensionMismatchError, GeometryError


def make_sets(rng, p, nq, npl, max_w=1):
    pts = random_distinct_points(rng, p, 3, nq)
    raw_planes = random_raw_planes(rng, p, 3, npl)
    wq = [rng.randrange(1, max_w + 1) for _ in pts]
    wp = [rng.randrange(1, max_w + 1) for _ in raw_planes]
    Q = WeightedPointSet.of(pts, p, weights=wq, dim=3)
    Pi = WeightedPlaneSet.of(raw_planes, p, weights=wp, dim=3)
    return Q, Pi


class TestWeightedSets:
    def test_duplicates_merge_by_weight(self):
        Q = WeightedPointSet.of([(0, 0, 0), (0, 0, 0), (1, 2, 3)], 7, weights=[2, 3, 1])
        assert Q.points == ((0, 0, 0), (1, 2, 3))
        assert Q.weights == (5, 1)
        assert Q.total_weight() == 6

    def test_coordinates_normalised(self):
        Q = WeightedPointSet.of([(-1, 7, 8)], 7)
        assert Q.points == ((6, 0, 1),)

    def test_bad_weight_rejected(self):
        with pytest.raises(ValueError):
            WeightedPointSet.of([(0, 0, 0)], 7, weights=[0])

    def test_empty_needs_dim(self):
        with pytest.raises(ValueError):
            WeightedPointSet.of([], 7)
        assert len(WeightedPointSet.of([], 7, dim=3)) == 0

    def test_plane_multiset_merge(self):
        # (1,1,1)=0 and (2,2,2)=0 are the same canonical plane
        Pi = WeightedPlaneSet.of([((1, 1, 1), 0), ((2, 2, 2), 0)], 7)
        assert len(Pi) == 1 and Pi.weights == (2,)


class TestCountPointPlane:
    def test_empty_points(self):
        Q = WeightedPointSet.of([], 7, dim=3)
        Pi = WeightedPlaneSet.of([((0, 0, 1), 0)], 7)
        rep = count_point_plane(Q, Pi)
        assert rep.pairs == 0 and rep.weighted == 0

    def test_single_weighted_incidence(self):
        Q = WeightedPointSet.of([(0, 0, 0)], 7, weights=[3])
        Pi = WeightedPlaneSet.of([((0, 0, 1), 0)], 7, weights=[5])
        rep = count_point_plane(Q, Pi)
        assert rep.pairs == 1 and rep.weighted == 15

    def test_empty_planes(self):
        Q = WeightedPointSet.of([(0, 0, 0)], 7)
        Pi = WeightedPlaneSet.of([], 7, dim=3)
        rep = count_point_plane(Q, Pi)
        assert rep.pairs == 0 and rep.weighted == 0

    def test_sphere_against_all_planes_matches_oracle(self):
        from fpgeom.constructions import sphere_config

        Q, Pi = sphere_config(3)
        assert len(Q) == 6 and len(Pi) == 39
        rep = count_point_plane(Q, Pi)
        raw_planes = [(pl.normal, pl.offset) for pl in Pi.planes]
        pairs, weighted = oracles.count_point_plane(
            Q.points, Q.weights, raw_planes, Pi.weights, 3
        )
        assert (rep.pairs, rep.weighted) == (pairs, weighted)

    @pytest.mark.parametrize("seed", range(8))
    def test_random_matches_oracle(self, seed):
        rng = rng_for("cpp", seed)
        p = rng.choice([5, 7, 11, 31])
        Q, Pi = make_sets(rng, p, rng.randrange(1, 60), rng.randrange(1, 60), max_w=4)
        rep = count_point_plane(Q, Pi)
        raw = [(pl.normal, pl.offset) for pl in Pi.planes]
        pairs, weighted = oracles.count_point_plane(Q.points, Q.weights, raw, Pi.weights, p)
        assert (rep.pairs, rep.weighted) == (pairs, weighted)
        npairs, nweighted = count_point_plane_naive(Q, Pi)
        assert (npairs, nweighted) == (pairs, weighted)

    def test_unit_weights_equal_pairs(self):
        rng = rng_for("unitw")
        Q, Pi = make_sets(rng, 11, 30, 30)
        rep = count_point_plane(Q, Pi)
        assert rep.weighted == rep.pairs

    def test_order_independence(self):
        rng = rng_for("order")
        pts = random_distinct_points(rng, 11, 3, 25)
        planes = random_raw_planes(rng, 11, 3, 25)
        a = count_point_plane(
            WeightedPointSet.of(pts, 11), WeightedPlaneSet.of(planes, 11)
        )
        rng.shuffle(pts)
        rng.shuffle(planes)
        b = count_point_plane(
            WeightedPointSet.of(pts, 11), WeightedPlaneSet.of(planes, 11)
        )
        assert a == b

    def test_flags_and_witness(self):
        rng = rng_for("flags")
        Q, Pi = make_sets(rng, 5, 30, 10)
        rep = count_point_plane(Q, Pi)
        assert rep.flags["points_lt_p_squared"] == (len(Q) < 25)
        assert rep.flags["points_le_planes"] == (len(Q) <= len(Pi))
        assert rep.k_witness is not None
        on_witness = sum(1 for q in Q.points if rep.k_witness.contains(q))
        assert on_witness == rep.k

    def test_dimension_guard(self):
        Q = WeightedPointSet.of([(0, 0)], 7, dim=2)
        Pi = WeightedPlaneSet.of([((0, 0, 1), 0)], 7)
        with pytest.raises(DimensionMismatchError):
            count_point_plane(Q, Pi)


class TestCountRestricted:
    def test_empty_forbidden_equals_plain(self):
        rng = rng_for("restr-empty")
        Q, Pi = make_sets(rng, 7, 25, 25)
        assert count_restricted(Q, Pi, []).pairs == count_point_plane(Q, Pi).pairs

    def test_all_routed_through_single_line(self):
        from fpgeom.geom import affine_planes

        p = 7
        line = AffineLine(p, (0, 0, 0), (1, 0, 0))
        pts = [(t, 0, 0) for t in range(p)]
        pencil = [pl for pl in affine_planes(p, 3) if pl.contains_line(line)]
        assert len(pencil) == p + 1
        Q = WeightedPointSet.of(pts, p)
        Pi = WeightedPlaneSet.of(pencil, p)
        rep = count_restricted(Q, Pi, [line])
        assert count_point_plane(Q, Pi).pairs == len(pts) * len(pencil)
        assert rep.pairs == 0
        assert rep.k_star == 1

    @pytest.mark.parametrize("seed", range(6))
    def test_random_matches_triple_loop_oracle(self, seed):
        rng = rng_for("restr", seed)
        p = 11
        Q, Pi = make_sets(rng, p, 20, 20, max_w=3)
        lines = [AffineLine(p, b, d) for b, d in random_raw_lines(rng, p, 3, 4)]
        # bias one line through an actual point so exclusions really happen
        if Q.points:
            lines.append(AffineLine(p, Q.points[0], (1, 0, 0)))
        rep = count_restricted(Q, Pi, lines)
        raw_planes = [(pl.normal, pl.offset) for pl in Pi.planes]
        raw_lines = [(l.base, l.direction) for l in lines]
        pairs, weighted = oracles.count_restricted(
            Q.points, Q.weights, raw_planes, Pi.weights, raw_lines, p
        )
        assert (rep.pairs, rep.weighted) == (pairs, weighted)
        assert rep.pairs <= count_point_plane(Q, Pi).pairs

    def test_k_star_witness_not_forbidden(self):
        p = 11
        rng = rng_for("kstar")
        pts = random_distinct_points(rng, p, 3, 20)
        Q = WeightedPointSet.of(pts, p)
        Pi = WeightedPlaneSet.of(random_raw_planes(rng, p, 3, 5), p)
        k, witness = max_collinear(pts, p)
        rep = count_restricted(Q, Pi, [witness])
        assert rep.k == k
        assert rep.k_star_witness != witness
        if rep.k_star_witness is not None:
            on_witness = sum(1 for q in pts if rep.k_star_witness.contains(q))
            assert on_witness == rep.k_star


class TestMaxCollinear:
    def test_three_collinear(self):
        k, line = max_collinear([(0, 0, 0), (1, 1, 1), (2, 2, 2), (1, 0, 0)], 7)
        assert k == 3 and line.contains((2, 2, 2))

    def test_grid_max_is_n(self):
        p, n = 13, 4
        pts = [(x, y) for x in range(1, n + 1) for y in range(1, n + 1)]
        k, _ = max_collinear(pts, p)
        assert k == n == oracles.max_collinear(pts, p)

    def test_general_position_sample(self):
        p = 31
        pts = [(1, 2, 3), (4, 9, 11), (0, 5, 17), (8, 8, 2), (12, 0, 7)]
        k, _ = max_collinear(pts, p)
        assert k == oracles.max_collinear(pts, p) == 2

    def test_needs_two_points(self):
        with pytest.raises(GeometryError):
            max_collinear([(0, 0, 0)], 7)

    @pytest.mark.parametrize("seed", range(5))
    def test_random_matches_oracle(self, seed):
        rng = rng_for("maxcol", seed)
        p = rng.choice([5, 11])
        pts = random_distinct_points(rng, p, 3, rng.randrange(2, 25))
        k, line = max_collinear(pts, p)
        assert k == oracles.max_collinear(pts, p)
        assert sum(1 for q in pts if line.contains(q)) == k


class TestPointLine2D:
    def test_empty_lines(self):
        assert count_point_line_2d([(0, 0)], [], 7) == 0

    def test_elekes_grid_n3(self):
        from fpgeom.constructions import elekes_grid

        grid = elekes_grid(3, 23)
        assert count_point_line_2d(grid.points, grid.lines, 23) == 81

    @pytest.mark.parametrize("seed", range(6))
    def test_random_matches_oracle(self, seed):
        rng = rng_for("ptline", seed)
        p = rng.choice([5, 7, 11, 31])
        pts = random_distinct_points(rng, p, 2, rng.randrange(1, 50))
        triples = []
        seen = set()
        for _ in range(rng.randrange(1, 40)):
            a, b, c = rng.randrange(p), rng.randrange(p), rng.randrange(p)
            if (a, b) == (0, 0):
                continue
            cov = AffinePlane(p, (a, b), c)
            if cov in seen:
                continue
            seen.add(cov)
            triples.append((cov.normal[0], cov.normal[1], cov.offset))
        got = count_point_line_2d(pts, triples, p)
        assert got == oracles.count_point_line_2d(pts, triples, p)
        assert got == count_point_line_2d_naive(pts, triples, p)


class TestRichLines:
    def test_grid_rich_lines_include_axes_and_diagonals(self):
        p, n = 17, 4
        pts = [(x, y) for x in range(n) for y in range(n)]
        hits = dict(rich_lines(pts, n, p))
        axis_count = sum(1 for line, c in hits.items() if c == n)
        # n horizontal, n vertical, 2 main diagonals hold exactly n points
        assert axis_count >= 2 * n + 2

    def test_threshold_above_size_is_empty(self):
        assert rich_lines([(0, 0), (1, 1)], 3, 7) == []

    def test_counts_match_membership_oracle(self):
        rng = rng_for("rich")
        p = 11
        pts = random_distinct_points(rng, p, 2, 30)
        for line, count in rich_lines(pts, 3, p):
            assert sum(1 for q in pts if line.contains(q)) == count
        # every line spanned by the set is accounted for
        for line, count in spanned_lines(pts, p).items():
            assert sum(1 for q in pts if line.contains(q)) == count

    def test_rejects_k_below_two(self):
        with pytest.raises(ValueError):
            rich_lines([(0, 0)], 1, 7)
