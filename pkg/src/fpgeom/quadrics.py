"""Spheres, the paraboloid, the isotropic cone, and lines living on them.

Generation is exhaustive (desk-scale p), backed by a per-prime square-root
table.  Line detection scans candidate (base, direction) pairs: a line lies
on a quadric exactly when all p of its points do, and a line on a sphere is
forced to have an isotropic direction, which prunes the scan without losing
candidates.  An unpruned scan is kept as the slow reference.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass

from .field import Prime, inv, sqrt_mod
from .geom import (
    AffineLine,
    GeometryError,
    Vec,
    as_vec,
    canonical_directions,
    dot,
    isotropic_directions,
    norm_sq,
    smul,
    vadd,
)


@dataclass(frozen=True)
class Sphere:
    """Solution set of x_1^2 + ... + x_d^2 == t in F_p^d."""

    p: int
    dim: int
    t: int

    def __post_init__(self):
        object.__setattr__(self, "p", int(Prime(self.p)))
        object.__setattr__(self, "t", int(self.t) % self.p)
        if self.dim not in (3, 4):
            raise GeometryError("spheres are generated in dimensions 3 and 4")

    def contains(self, x: Vec) -> bool:
        return norm_sq(as_vec(x, self.p, self.dim), self.p) == self.t

    def points(self) -> list[Vec]:
        return sphere_points(self.p, self.dim, self.t)


@dataclass(frozen=True)
class Paraboloid:
    """Graph {(u, u.u) : u in F_p^(d-1)} inside F_p^d."""

    p: int
    dim: int

    def __post_init__(self):
        object.__setattr__(self, "p", int(Prime(self.p)))
        if self.dim not in (3, 4):
            raise GeometryError("the paraboloid is generated in dimensions 3 and 4")

    def contains(self, x: Vec) -> bool:
        x = as_vec(x, self.p, self.dim)
        return x[-1] == norm_sq(x[:-1], self.p)

    def lift(self, u: Vec) -> Vec:
        u = as_vec(u, self.p, self.dim - 1)
        return u + (norm_sq(u, self.p),)

    def points(self) -> list[Vec]:
        return [
            self.lift(u) for u in itertools.product(range(self.p), repeat=self.dim - 1)
        ]


@functools.lru_cache(maxsize=None)
def _sqrt_table(p: int) -> tuple[tuple[int, ...], ...]:
    return tuple(sqrt_mod(r, p) or () for r in range(p))


def sphere_points(p: int, d: int, t: int) -> list[Vec]:
    """Every solution of x_1^2 + ... + x_d^2 == t, in lex order."""
    p = int(Prime(p))
    if d not in (3, 4):
        raise GeometryError("spheres are generated in dimensions 3 and 4")
    t %= p
    roots = _sqrt_table(p)
    pts: list[Vec] = []
    for head in itertools.product(range(p), repeat=d - 1):
        r = (t - sum(c * c for c in head)) % p
        for z in roots[r]:
            pts.append(head + (z,))
    return pts


def paraboloid_lift(points, p: int) -> list[Vec]:
    """Append the dot-square coordinate to each point, preserving order."""
    return [as_vec(u, p) + (norm_sq(as_vec(u, p), p),) for u in points]


def slice_lift(points, h: int, p: int) -> list[Vec]:
    """Points of the height-h slice, re-lifted onto the paraboloid."""
    h %= p
    return sorted(
        {
            as_vec(x, p)[:-1] + (norm_sq(as_vec(x, p)[:-1], p),)
            for x in points
            if as_vec(x, p)[-1] == h
        }
    )


# ---------------------------------------------------------------------------
# lines on quadrics

def lines_on_sphere(p: int, d: int, t: int) -> list[AffineLine]:
    """All lines fully contained in the sphere.

    Every candidate must be based at a sphere point with an isotropic
    direction orthogonal to the base; each emitted line is still verified
    pointwise.
    """
    p = int(Prime(p))
    t %= p
    sphere = Sphere(p, d, t)
    out: set[AffineLine] = set()
    for x in sphere.points():
        for v in isotropic_directions(p, d):
            if dot(x, v, p) != 0:
                continue
            line = AffineLine(p, x, v)
            if line in out:
                continue
            if all(sphere.contains(q) for q in line.points()):
                out.add(line)
    return sorted(out)


def lines_on_sphere2(p: int, t: int) -> list[AffineLine]:
    """Lines on the two-dimensional sphere of nonzero radius-square."""
    if t % p == 0:
        raise GeometryError("use isotropic_cone_lines for the cone")
    return lines_on_sphere(p, 3, t)


def lines_on_sphere_scan(p: int, d: int, t: int) -> list[AffineLine]:
    """Slow reference: scan every canonical (base, direction) pair."""
    p = int(Prime(p))
    sphere = Sphere(p, d, t)
    out: set[AffineLine] = set()
    for v in canonical_directions(p, d):
        j = next(i for i, c in enumerate(v) if c != 0)
        for base in itertools.product(range(p), repeat=d):
            if base[j] != 0:
                continue  # one canonical base per line
            line = AffineLine(p, base, v)
            if all(sphere.contains(q) for q in line.points()):
                out.add(line)
    return sorted(out)


def isotropic_cone_lines(p: int) -> list[AffineLine]:
    """The lines through the origin forming the nonzero part of the cone in F_p^3."""
    p = int(Prime(p))
    return sorted(AffineLine(p, (0, 0, 0), v) for v in isotropic_directions(p, 3))


# ---------------------------------------------------------------------------
# the cylinder of isotropic generators around an isotropic line on S^3_t

@dataclass(frozen=True)
class CylinderReport:
    """Generator lines of the cylinder cut on the sphere by the orthogonal
    complement of an isotropic line, with the shift producing each one."""

    axis: AffineLine
    point: Vec
    t: int
    shifts: tuple[tuple[Vec, int], ...]  # (direction v, shift beta(v))
    generators: tuple[AffineLine, ...]


def isotropic_cylinder(line: AffineLine, x: Vec, sphere: Sphere) -> CylinderReport:
    """Describe l^perp intersected with the sphere as parallel isotropic lines.

    For each direction v orthogonal to the axis with v.v != 0, the point
    x + beta(v) * v with beta(v) = -2(x.v)/(v.v) is back on the sphere and
    generates a line parallel to the axis.  Preconditions (isotropic axis
    contained in the sphere, x on both) are checked individually.
    """
    p = sphere.p
    if sphere.dim != 4:
        raise GeometryError("the cylinder construction lives on the 3-sphere in F_p^4")
    if line.p != p:
        raise GeometryError("axis modulus differs from sphere modulus")
    if not line.is_isotropic():
        raise GeometryError("axis direction is not isotropic")
    if not all(sphere.contains(q) for q in line.points()):
        raise GeometryError("axis is not contained in the sphere")
    x = as_vec(x, p, 4)
    if not line.contains(x):
        raise GeometryError("base point is not on the axis")
    if not sphere.contains(x):
        raise GeometryError("base point is not on the sphere")
    u = line.direction
    shifts: list[tuple[Vec, int]] = []
    gens: set[AffineLine] = set()
    for v in canonical_directions(p, 4):
        if dot(u, v, p) != 0:
            continue
        nv = norm_sq(v, p)
        if nv == 0:
            continue
        beta = -2 * dot(x, v, p) * inv(nv, p) % p
        q = vadd(x, smul(beta, v, p), p)
        gen = AffineLine(p, q, u)
        if not sphere.contains(q) or not all(sphere.contains(w) for w in gen.points()):
            raise ArithmeticError("cylinder generator left the sphere")  # unreachable
        if not gen.is_isotropic():
            raise ArithmeticError("cylinder generator is not isotropic")  # unreachable
        shifts.append((v, beta))
        gens.add(gen)
    return CylinderReport(
        axis=line,
        point=x,
        t=sphere.t,
        shifts=tuple(shifts),
        generators=tuple(sorted(gens)),
    )
