"""Distance sets, distance energies, bilinear-form value sets, the wedge
reduction to weighted point-plane incidences, and right-triangle counts.

All counts are exact; squared distance means the dot-square of the
difference vector, so a "zero distance" can join distinct points when their
difference is isotropic.
"""

from __future__ import annotations

from dataclasses import dataclass

from .field import Prime
from .geom import (
    AffineLine,
    AffinePlane,
    CoincidentPointsError,
    GeometryError,
    ProjPlane,
    ProjPoint,
    Vec,
    as_vec,
    dir_perp,
    dot,
    isotropic_directions,
    norm_sq,
    scale_canonical,
    vsub,
)


class NullPairError(GeometryError):
    """A construction that needs a non-null point pair received a null one."""


# ---------------------------------------------------------------------------
# distance sets

@dataclass(frozen=True)
class DistanceReport:
    """Full and pinned squared-distance statistics of a point set."""

    values: frozenset[int]
    nonzero_values: frozenset[int]
    pinned_counts: tuple[int, ...]
    pinned_counts_nonzero: tuple[int, ...]
    max_pinned: int
    min_pinned: int
    zero_pairs: int  # ordered pairs of distinct points at squared distance 0
    in_semi_isotropic_plane: bool | None


def supported_in_semi_isotropic_plane(points, p: int) -> bool:
    """True when every point lies in one plane orthogonal to an isotropic direction."""
    pts = [as_vec(q, p, 3) for q in points]
    if len(pts) <= 1:
        return True
    for y in isotropic_directions(p, 3):
        if len({dot(y, q, p) for q in pts}) == 1:
            return True
    return False


def distance_set(points, p: int, include_zero: bool = True) -> DistanceReport:
    """Exact distance set and per-point pinned counts, by double loop.

    Pinned counts always see the zero distance from the point to itself;
    the nonzero variants drop the value 0 entirely.
    """
    p = int(Prime(p))
    pts = sorted({as_vec(q, p) for q in points})
    if len(pts) < 2:
        raise GeometryError("need at least two distinct points")
    dim = len(pts[0])
    values: set[int] = set()
    pinned: list[int] = []
    pinned_nz: list[int] = []
    zero_pairs = 0
    for s in pts:
        seen = {norm_sq(vsub(s, t, p), p) for t in pts}
        values |= seen
        pinned.append(len(seen))
        pinned_nz.append(len(seen - {0}))
        zero_pairs += sum(
            1 for t in pts if t != s and norm_sq(vsub(s, t, p), p) == 0
        )
    counts = pinned if include_zero else pinned_nz
    return DistanceReport(
        values=frozenset(values),
        nonzero_values=frozenset(values - {0}),
        pinned_counts=tuple(pinned),
        pinned_counts_nonzero=tuple(pinned_nz),
        max_pinned=max(counts),
        min_pinned=min(counts),
        zero_pairs=zero_pairs,
        in_semi_isotropic_plane=(
            supported_in_semi_isotropic_plane(pts, p) if dim == 3 else None
        ),
    )


def energy_delta(points, p: int, restricted: bool = False) -> int:
    """Number of triples (s, t, t') with |s-t|^2 == |s-t'|^2 != 0.

    The restricted variant additionally requires the pair (t, t') to be
    non-null, dropping equidistant pairs with isotropic difference.
    """
    p = int(Prime(p))
    pts = sorted({as_vec(q, p, 3) for q in points})
    total = 0
    for s in pts:
        groups: dict[int, list[Vec]] = {}
        for t in pts:
            groups.setdefault(norm_sq(vsub(s, t, p), p), []).append(t)
        for r, members in groups.items():
            if r == 0:
                continue
            if not restricted:
                total += len(members) * len(members)
            else:
                total += sum(
                    1
                    for t in members
                    for t2 in members
                    if norm_sq(vsub(t, t2, p), p) != 0 or t == t2
                )
    return total


def bisector_plane(t1: Vec, t2: Vec, p: int) -> AffinePlane:
    """Plane of points equidistant from t1 and t2: 2 s.(t1-t2) == |t1|^2 - |t2|^2.

    Raises for coincident points, and for null pairs, where the locus
    degenerates (it then contains the pair itself).
    """
    p = int(Prime(p))
    t1, t2 = as_vec(t1, p, 3), as_vec(t2, p, 3)
    if t1 == t2:
        raise CoincidentPointsError("equidistance plane needs two distinct points")
    d = vsub(t1, t2, p)
    if norm_sq(d, p) == 0:
        raise NullPairError(f"pair with isotropic difference {d} has a degenerate bisector")
    normal = tuple(2 * c % p for c in d)
    offset = (norm_sq(t1, p) - norm_sq(t2, p)) % p
    return AffinePlane(p, normal, offset)


# ---------------------------------------------------------------------------
# bilinear forms

@dataclass(frozen=True)
class FormSpec:
    """Non-degenerate bilinear form on F_p^2 given by its 2x2 matrix."""

    p: int
    matrix: tuple[tuple[int, int], tuple[int, int]]

    def __post_init__(self):
        p = int(Prime(self.p))
        m = tuple(tuple(int(c) % p for c in row) for row in self.matrix)
        if len(m) != 2 or any(len(row) != 2 for row in m):
            raise GeometryError("form matrix must be 2x2")
        if (m[0][0] * m[1][1] - m[0][1] * m[1][0]) % p == 0:
            raise GeometryError("form matrix is degenerate")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "matrix", m)

    def evaluate(self, s: Vec, t: Vec) -> int:
        p, m = self.p, self.matrix
        s, t = as_vec(s, p, 2), as_vec(t, p, 2)
        return (
            s[0] * (m[0][0] * t[0] + m[0][1] * t[1])
            + s[1] * (m[1][0] * t[0] + m[1][1] * t[1])
        ) % p


def wedge_form(p: int) -> FormSpec:
    return FormSpec(p, ((0, 1), (-1, 0)))


def dot_form(p: int) -> FormSpec:
    return FormSpec(p, ((1, 0), (0, 1)))


def form_values(points, form: FormSpec) -> frozenset[int]:
    """Exact value set {form(s, t) : s, t in S}."""
    p = form.p
    pts = sorted({as_vec(q, p, 2) for q in points})
    return frozenset(form.evaluate(s, t) for s in pts for t in pts)


def form_solution_count(
    s_points, t_points, form: FormSpec, include_zero: bool = False
) -> int:
    """Number of quadruples (s, s', t, t') in S x S x T x T with
    form(s, t) == form(s', t'), nonzero values only unless include_zero."""
    p = form.p
    S = sorted({as_vec(q, p, 2) for q in s_points})
    T = sorted({as_vec(q, p, 2) for q in t_points})
    hist: dict[int, int] = {}
    for s in S:
        for t in T:
            v = form.evaluate(s, t)
            hist[v] = hist.get(v, 0) + 1
    return sum(c * c for v, c in hist.items() if include_zero or v != 0)


def wedge_solution_count(s_points, t_points, p: int) -> int:
    """Solutions of s ^ t == s' ^ t' != 0 over S x S x T x T."""
    return form_solution_count(s_points, t_points, wedge_form(p), include_zero=False)


# ---------------------------------------------------------------------------
# the wedge equation as a weighted point-plane system

@dataclass(frozen=True)
class WedgeIncidenceSystem:
    """Weighted projective points (s : t') and planes (t-perp : s'-perp)
    whose weighted incidences count the solutions of s ^ t + t' ^ s' == 0."""

    p: int
    points: tuple[tuple[ProjPoint, int], ...]
    planes: tuple[tuple[ProjPlane, int], ...]

    def total_point_weight(self) -> int:
        return sum(w for _, w in self.points)

    def total_plane_weight(self) -> int:
        return sum(w for _, w in self.planes)

    def weighted_incidences(self) -> int:
        p = self.p
        total = 0
        for q, wq in self.points:
            for h, wh in self.planes:
                if dot(q.coords, h.coords, p) == 0:
                    total += wq * wh
        return total


def wedge_to_incidence(s_points, t_points, p: int) -> WedgeIncidenceSystem:
    """Bundle (s, t') pairs into projective point classes and (t, s') pairs
    into plane classes; scaling a pair by a common dilation keeps its class,
    and the class weight is the number of pairs it absorbs."""
    p = int(Prime(p))
    S = sorted({as_vec(q, p, 2) for q in s_points})
    T = sorted({as_vec(q, p, 2) for q in t_points})
    if (0, 0) in S or (0, 0) in T:
        raise GeometryError("the reduction needs origin-free input sets")
    pt_weights: dict[ProjPoint, int] = {}
    pl_weights: dict[ProjPlane, int] = {}
    for s in S:
        for t2 in T:
            q = ProjPoint(p, (s[0], s[1], t2[0], t2[1]))
            pt_weights[q] = pt_weights.get(q, 0) + 1
    for t in T:
        for s2 in S:
            h = ProjPlane(p, (t[1], -t[0] % p, s2[1], -s2[0] % p))
            pl_weights[h] = pl_weights.get(h, 0) + 1
    return WedgeIncidenceSystem(
        p=p,
        points=tuple(sorted(pt_weights.items())),
        planes=tuple(sorted(pl_weights.items())),
    )


# ---------------------------------------------------------------------------
# right triangles in the plane

@dataclass(frozen=True)
class RightTriangleReport:
    """Count of right-angle triples and the per-corner line tables behind it.

    total counts ordered triples (x, y, z) with x != z != y and
    (x - z).(z - y) == 0.  For each corner z and each line l through z
    spanned by the set, n(l) is the number of other points on l; the
    aggregation of n(l) * n(l-perp) over corners reproduces total exactly.
    """

    total: int
    aggregated: int
    tables: tuple[tuple[Vec, tuple[tuple[AffineLine, int], ...]], ...]


def right_triangle_count(points, p: int) -> RightTriangleReport:
    p = int(Prime(p))
    pts = sorted({as_vec(q, p, 2) for q in points})
    if len(pts) < 3:
        raise GeometryError("need at least three distinct points")
    total = 0
    aggregated = 0
    tables = []
    for z in pts:
        diffs = [vsub(x, z, p) for x in pts if x != z]
        # direct evaluation of the right-angle condition at this corner
        for dx in diffs:
            for dy in diffs:
                if (dx[0] * dy[0] + dx[1] * dy[1]) % p == 0:
                    total += 1
        groups: dict[Vec, int] = {}
        for d in diffs:
            cd = scale_canonical(d, p)
            groups[cd] = groups.get(cd, 0) + 1
        corner = 0
        rows = []
        for d, c in sorted(groups.items()):
            corner += c * groups.get(dir_perp(d, p), 0)
            rows.append((AffineLine(p, z, d), c))
        aggregated += corner
        tables.append((z, tuple(rows)))
    if total != aggregated:
        raise ArithmeticError("right-triangle aggregation diverged from direct count")
    return RightTriangleReport(total=total, aggregated=aggregated, tables=tuple(tables))
