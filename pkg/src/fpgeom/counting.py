"""Incidence counting engines.

Every counter has two routes: a vectorised exact-integer path (numpy) and a
naive nested-loop path; both produce identical results and tests hold them
to independent oracles.  Inputs are canonicalised weighted sets, so counts
do not depend on input order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .field import Prime
from .geom import (
    AffineLine,
    AffinePlane,
    DimensionMismatchError,
    GeometryError,
    Vec,
    as_vec,
    line_as_covector,
    scale_canonical,
    vsub,
)

# numpy's int64 products stay exact below this; larger weighted totals take
# the pure-python route.
_NP_SAFE = 1 << 62


@dataclass(frozen=True)
class WeightedPointSet:
    """Distinct points with positive integer weights, canonically sorted.

    Duplicate input points are merged by summing weights, so a multiset is
    always represented the same way regardless of input order.
    """

    p: int
    dim: int
    points: tuple[Vec, ...]
    weights: tuple[int, ...]

    @classmethod
    def of(cls, points, p: int, weights=None, dim: int | None = None) -> "WeightedPointSet":
        p = Prime(p)
        pts = [as_vec(q, p) for q in points]
        if weights is None:
            weights = [1] * len(pts)
        if len(weights) != len(pts):
            raise ValueError("weights and points differ in length")
        if dim is None:
            if not pts:
                raise ValueError("empty set needs an explicit dimension")
            dim = len(pts[0])
        merged: dict[Vec, int] = {}
        for q, w in zip(pts, weights):
            if len(q) != dim:
                raise DimensionMismatchError(f"point {q} is not {dim}-dimensional")
            w = int(w)
            if w < 1:
                raise ValueError(f"weights must be positive, got {w}")
            merged[q] = merged.get(q, 0) + w
        keys = sorted(merged)
        return cls(p, dim, tuple(keys), tuple(merged[k] for k in keys))

    def __len__(self) -> int:
        return len(self.points)

    def total_weight(self) -> int:
        return sum(self.weights)

    def max_weight(self) -> int:
        return max(self.weights, default=0)

    def coords_array(self) -> np.ndarray:
        return np.array(self.points, dtype=np.int64).reshape(len(self.points), self.dim)


@dataclass(frozen=True)
class WeightedPlaneSet:
    """Distinct affine hyperplanes with positive weights, canonically sorted."""

    p: int
    dim: int
    planes: tuple[AffinePlane, ...]
    weights: tuple[int, ...]

    @classmethod
    def of(cls, planes, p: int, weights=None, dim: int | None = None) -> "WeightedPlaneSet":
        p = Prime(p)
        objs: list[AffinePlane] = []
        for item in planes:
            if isinstance(item, AffinePlane):
                if item.p != p:
                    raise ValueError("plane modulus differs from set modulus")
                objs.append(item)
            else:
                normal, offset = item
                objs.append(AffinePlane(p, tuple(normal), offset))
        if weights is None:
            weights = [1] * len(objs)
        if len(weights) != len(objs):
            raise ValueError("weights and planes differ in length")
        if dim is None:
            if not objs:
                raise ValueError("empty set needs an explicit dimension")
            dim = objs[0].dim
        merged: dict[AffinePlane, int] = {}
        for pl, w in zip(objs, weights):
            if pl.dim != dim:
                raise DimensionMismatchError(f"plane {pl} is not {dim}-dimensional")
            w = int(w)
            if w < 1:
                raise ValueError(f"weights must be positive, got {w}")
            merged[pl] = merged.get(pl, 0) + w
        keys = sorted(merged)
        return cls(p, dim, tuple(keys), tuple(merged[k] for k in keys))

    def __len__(self) -> int:
        return len(self.planes)

    def total_weight(self) -> int:
        return sum(self.weights)

    def max_weight(self) -> int:
        return max(self.weights, default=0)

    def arrays(self) -> tuple[np.ndarray, np.ndarray]:
        normals = np.array([pl.normal for pl in self.planes], dtype=np.int64).reshape(
            len(self.planes), self.dim
        )
        offsets = np.array([pl.offset for pl in self.planes], dtype=np.int64)
        return normals, offsets


@dataclass(frozen=True)
class IncidenceReport:
    """Exact incidence counts with the collinearity statistics the bound
    evaluators consume and the hypothesis flags they report."""

    pairs: int
    weighted: int
    distinct_points: int
    distinct_planes: int
    point_weight: int
    plane_weight: int
    max_point_weight: int
    max_plane_weight: int
    k: int
    k_witness: AffineLine | None
    flags: dict[str, bool] = field(default_factory=dict)
    restricted: bool = False
    k_star: int | None = None
    k_star_witness: AffineLine | None = None


# ---------------------------------------------------------------------------
# core incidence machinery

def incidence_matrix(points: WeightedPointSet, planes: WeightedPlaneSet) -> np.ndarray:
    """Boolean matrix inc[i, j] == (point i lies on plane j), exact integers."""
    p = points.p
    P = points.coords_array()
    N, off = planes.arrays()
    acc = np.zeros((len(points), len(planes)), dtype=np.int64)
    for c in range(points.dim):
        acc = (acc + P[:, c : c + 1] * N[:, c]) % p
    return acc == off


def _forbidden_mask(
    points: WeightedPointSet, planes: WeightedPlaneSet, lines: tuple[AffineLine, ...]
) -> np.ndarray:
    mask = np.zeros((len(points), len(planes)), dtype=bool)
    for line in lines:
        on_line = np.array([line.contains(q) for q in points.points], dtype=bool)
        if not on_line.any():
            continue
        in_plane = np.array([pl.contains_line(line) for pl in planes.planes], dtype=bool)
        if in_plane.any():
            mask |= np.outer(on_line, in_plane)
    return mask


def _totals(points, planes, inc) -> tuple[int, int]:
    pairs = int(inc.sum())
    if points.total_weight() * planes.total_weight() < _NP_SAFE:
        wq = np.array(points.weights, dtype=np.int64)
        wp = np.array(planes.weights, dtype=np.int64)
        weighted = int(wq @ inc @ wp)
    else:
        weighted = 0
        for i, wq in enumerate(points.weights):
            row = inc[i]
            weighted += wq * sum(w for j, w in enumerate(planes.weights) if row[j])
    return pairs, weighted


def _base_flags(points: WeightedPointSet, planes: WeightedPlaneSet) -> dict[str, bool]:
    p = points.p
    return {
        "points_lt_p_squared": len(points) < p * p,
        "points_le_planes": len(points) <= len(planes),
        "weight_ratio_lt_p_squared": (
            points.max_weight() == 0
            or points.total_weight() < p * p * points.max_weight()
        ),
    }


def count_point_plane(points: WeightedPointSet, planes: WeightedPlaneSet) -> IncidenceReport:
    """Exact weighted and unweighted point-plane incidence counts in F_p^3.

    The weighted total sums w(q) * w(pi) over incident pairs; k is the
    maximum number of collinear distinct points, ignoring weights.
    """
    _require_dim3(points, planes)
    inc = incidence_matrix(points, planes)
    pairs, weighted = _totals(points, planes, inc)
    k, wit = _collinearity(points)
    return IncidenceReport(
        pairs=pairs,
        weighted=weighted,
        distinct_points=len(points),
        distinct_planes=len(planes),
        point_weight=points.total_weight(),
        plane_weight=planes.total_weight(),
        max_point_weight=points.max_weight(),
        max_plane_weight=planes.max_weight(),
        k=k,
        k_witness=wit,
        flags=_base_flags(points, planes),
    )


def count_restricted(
    points: WeightedPointSet,
    planes: WeightedPlaneSet,
    forbidden: list[AffineLine] | tuple[AffineLine, ...],
) -> IncidenceReport:
    """Incidence count discarding pairs (q, pi) routed through a forbidden line.

    A pair is discarded when some forbidden line contains q and lies inside
    pi.  k* is the largest number of points on any line outside the
    forbidden family.
    """
    _require_dim3(points, planes)
    forb = tuple(sorted(set(forbidden)))
    for line in forb:
        if line.p != points.p or line.dim != points.dim:
            raise DimensionMismatchError("forbidden line does not match the sets")
    inc = incidence_matrix(points, planes)
    keep = inc & ~_forbidden_mask(points, planes, forb)
    pairs, weighted = _totals(points, planes, keep)
    k, wit = _collinearity(points)
    k_star, wit_star = _collinearity(points, exclude=set(forb))
    return IncidenceReport(
        pairs=pairs,
        weighted=weighted,
        distinct_points=len(points),
        distinct_planes=len(planes),
        point_weight=points.total_weight(),
        plane_weight=planes.total_weight(),
        max_point_weight=points.max_weight(),
        max_plane_weight=planes.max_weight(),
        k=k,
        k_witness=wit,
        flags=_base_flags(points, planes),
        restricted=True,
        k_star=k_star,
        k_star_witness=wit_star,
    )


def count_point_plane_naive(
    points: WeightedPointSet,
    planes: WeightedPlaneSet,
    forbidden: tuple[AffineLine, ...] = (),
) -> tuple[int, int]:
    """Reference nested-loop route; returns (pairs, weighted)."""
    _require_dim3(points, planes)
    p = points.p
    pairs = weighted = 0
    forb = tuple(forbidden)
    for q, wq in zip(points.points, points.weights):
        for pl, wp in zip(planes.planes, planes.weights):
            if not pl.contains(q):
                continue
            if forb and any(l.contains(q) and pl.contains_line(l) for l in forb):
                continue
            pairs += 1
            weighted += wq * wp
    return pairs, weighted


def _require_dim3(points, planes) -> None:
    if points.dim != 3 or planes.dim != 3:
        raise DimensionMismatchError("point-plane counting works in dimension 3")
    if points.p != planes.p:
        raise ValueError("point and plane sets use different moduli")


# ---------------------------------------------------------------------------
# collinearity statistics

def _direction_groups(pts: tuple[Vec, ...], i: int, p: int) -> dict[Vec, int]:
    """Counts of later points by canonical direction from pts[i]."""
    groups: dict[Vec, int] = {}
    base = pts[i]
    for j in range(i + 1, len(pts)):
        d = scale_canonical(vsub(pts[j], base, p), p)
        groups[d] = groups.get(d, 0) + 1
    return groups


def _collinearity(
    points: WeightedPointSet, exclude: set[AffineLine] | None = None
) -> tuple[int, AffineLine | None]:
    pts, p = points.points, points.p
    n = len(pts)
    if n == 0:
        return 0, None
    if n == 1:
        return 1, None
    best, witness = 1, None
    for i in range(n):
        for d, c in _direction_groups(pts, i, p).items():
            if c + 1 <= best:
                continue
            line = AffineLine(p, pts[i], d)
            if exclude and line in exclude:
                continue
            best, witness = c + 1, line
    return best, witness


def max_collinear(points, p: int, sample: int | None = None) -> tuple[int, AffineLine]:
    """Largest number of collinear points and a witness line achieving it.

    The exact pass considers every point as a base (quadratic in the set
    size).  For very large sets, `sample` restricts the base points to a
    seeded random subset; the result is then a lower bound for k and is
    never used where exactness is required.
    """
    pts = sorted({as_vec(q, p) for q in points})
    if len(pts) < 2:
        raise GeometryError("need at least two distinct points")
    if sample is not None and sample < len(pts):
        import random

        bases = sorted(random.Random(("max-collinear", len(pts), sample)).sample(
            range(len(pts)), sample))
        best, witness = 1, None
        for i in bases:
            groups: dict[Vec, int] = {}
            for j, q in enumerate(pts):
                if j == i:
                    continue
                d = scale_canonical(vsub(q, pts[i], p), p)
                groups[d] = groups.get(d, 0) + 1
            for d, c in groups.items():
                if c + 1 > best:
                    best, witness = c + 1, AffineLine(p, pts[i], d)
        assert witness is not None
        return best, witness
    ws = WeightedPointSet.of(pts, p)
    k, wit = _collinearity(ws)
    assert wit is not None
    return k, wit


def spanned_lines(points, p: int) -> dict[AffineLine, int]:
    """Every line through at least two of the points, with its exact point count."""
    pts = sorted({as_vec(q, p) for q in points})
    out: dict[AffineLine, int] = {}
    for i in range(len(pts)):
        for d, c in _direction_groups(pts, i, p).items():
            line = AffineLine(p, pts[i], d)
            # the earliest point of a line sees all the others
            if line not in out:
                out[line] = c + 1
    return out


def rich_lines(points, k: int, p: int) -> list[tuple[AffineLine, int]]:
    """All lines holding at least k points of the planar set, with counts."""
    if k < 2:
        raise ValueError("richness threshold must be at least 2")
    counted = spanned_lines(points, p)
    hits = [(line, c) for line, c in counted.items() if c >= k]
    hits.sort(key=lambda item: (-item[1], item[0]))
    return hits


# ---------------------------------------------------------------------------
# planar point-line incidences

def count_point_line_2d(points, lines, p: int) -> int:
    """Exact number of incidences between distinct planar points and lines.

    Lines are given in covector form a*x + b*y == c (AffinePlane of
    dimension 2) or as (a, b, c) triples.
    """
    pts = sorted({as_vec(q, p, 2) for q in points})
    covs: list[AffinePlane] = []
    for item in lines:
        if isinstance(item, AffinePlane):
            cov = item
        elif isinstance(item, AffineLine):
            cov = line_as_covector(item)
        else:
            a, b, c = item
            cov = AffinePlane(p, (a, b), c)
        if cov.dim != 2 or cov.p != p:
            raise DimensionMismatchError("planar counting expects 2-dimensional lines")
        covs.append(cov)
    covs = sorted(set(covs))
    if not pts or not covs:
        return 0
    P = np.array(pts, dtype=np.int64)
    N = np.array([c.normal for c in covs], dtype=np.int64)
    off = np.array([c.offset for c in covs], dtype=np.int64)
    acc = np.zeros((len(pts), len(covs)), dtype=np.int64)
    for c in range(2):
        acc = (acc + P[:, c : c + 1] * N[:, c]) % p
    return int((acc == off).sum())


def count_point_line_2d_naive(points, lines, p: int) -> int:
    """Reference loop for the planar counter."""
    pts = sorted({as_vec(q, p, 2) for q in points})
    covs = sorted(
        {
            item
            if isinstance(item, AffinePlane)
            else AffinePlane(p, (item[0], item[1]), item[2])
            for item in lines
        }
    )
    return sum(1 for q in pts for cov in covs if cov.contains(q))
