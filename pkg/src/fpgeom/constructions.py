"""Generators for the extremal configurations used in the sharpness sweeps.

Each generator validates its wraparound constraints as hard preconditions
and emits standard point/plane/line objects for the counters.  Randomised
variants are seed-driven and deterministic for a fixed seed.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .counting import WeightedPlaneSet, WeightedPointSet
from .field import Prime
from .geom import (
    AffineLine,
    AffinePlane,
    Vec,
    affine_planes,
    dot,
    isotropic_directions,
    norm_sq,
    scale_canonical,
    smul,
    vadd,
)
from .quadrics import Sphere, isotropic_cylinder, lines_on_sphere, sphere_points


class ConstraintError(ValueError):
    """A generator precondition (wraparound bound, feasibility) failed."""


def sphere_config(p: int) -> tuple[WeightedPointSet, WeightedPlaneSet]:
    """The unit sphere of F_p^3 against the complete affine plane family."""
    p = int(Prime(p))
    points = WeightedPointSet.of(sphere_points(p, 3, 1), p, dim=3)
    planes = WeightedPlaneSet.of(affine_planes(p, 3), p, dim=3)
    return points, planes


def coprime_lattice(n_max: int, p: int) -> list[Vec]:
    """Points of [1..N]^2 with coprime coordinates, embedded mod p.

    Requires N < sqrt(p)/2, so every pairwise dot product lives in
    [2, 2N^2] below p/2 and no value wraps around.
    """
    p = int(Prime(p))
    if n_max < 1:
        raise ConstraintError("N must be positive")
    if 4 * n_max * n_max >= p:
        raise ConstraintError(f"need N < sqrt(p)/2: N={n_max}, p={p}")
    return [
        (a % p, b % p)
        for a in range(1, n_max + 1)
        for b in range(1, n_max + 1)
        if math.gcd(a, b) == 1
    ]


@dataclass(frozen=True)
class ElekesGrid:
    """The uneven grid [1..n] x [1..2n^2] with its n^3 covering lines.

    Every line y = a*x + b (a in [1..n], b in [1..n^2]) meets the grid in
    exactly n points, so the incidence count is n^4.
    """

    p: int
    n: int
    points: tuple[Vec, ...]
    lines: tuple[AffinePlane, ...]


def elekes_grid(n: int, p: int) -> ElekesGrid:
    p = int(Prime(p))
    if n < 1:
        raise ConstraintError("n must be positive")
    if 2 * n * n >= p:
        raise ConstraintError(f"need p > 2n^2 to avoid wraparound: n={n}, p={p}")
    points = tuple(
        (x % p, y % p) for x in range(1, n + 1) for y in range(1, 2 * n * n + 1)
    )
    lines = tuple(
        AffinePlane(p, (a, p - 1), -b % p)  # a*x - y == -b
        for a in range(1, n + 1)
        for b in range(1, n * n + 1)
    )
    return ElekesGrid(p=p, n=n, points=points, lines=lines)


@dataclass(frozen=True)
class SemiIsotropicSet:
    """Points on k parallel isotropic lines inside one semi-isotropic plane.

    Squared distances collapse to (a - a')^2 * |x|^2, so at most k distinct
    nonzero values occur however the points sit along the lines.
    """

    p: int
    k: int
    line_count: int
    points: tuple[Vec, ...]
    isotropic_direction: Vec
    cross_direction: Vec
    cross_norm: int


def semi_isotropic_set(k: int, l: int, p: int, seed: int | None = None) -> SemiIsotropicSet:
    p = int(Prime(p))
    if not 1 <= k <= l:
        raise ConstraintError("need 1 <= k <= l")
    if l > p:
        raise ConstraintError(f"cannot place {l} distinct points on a line over F_{p}")
    if k >= p:
        raise ConstraintError(f"need k < p distinct line offsets, got k={k}")
    iso = isotropic_directions(p, 3)
    if not iso:
        raise ConstraintError(f"no isotropic direction available in F_{p}^3")
    y = iso[0]
    x = _orthogonal_anisotropic(y, p)
    rng = random.Random(seed)
    points: list[Vec] = []
    for a in range(1, k + 1):
        if seed is None:
            offsets = range(1, l + 1)
        else:
            offsets = rng.sample(range(p), l)
        for b in offsets:
            points.append(vadd(smul(a, x, p), smul(b, y, p), p))
    return SemiIsotropicSet(
        p=p,
        k=k,
        line_count=k,
        points=tuple(points),
        isotropic_direction=y,
        cross_direction=x,
        cross_norm=norm_sq(x, p),
    )


def _orthogonal_anisotropic(y: Vec, p: int) -> Vec:
    # any vector of y-perp outside span(y) is automatically non-isotropic in F_p^3
    from .geom import homogeneous_reps

    for x in homogeneous_reps(p, 3):
        if dot(x, y, p) != 0:
            continue
        if scale_canonical(x, p) == scale_canonical(y, p):
            continue
        if norm_sq(x, p) == 0:
            raise ArithmeticError("two orthogonal isotropic directions in F_p^3")
        return x
    raise ConstraintError("no anisotropic vector orthogonal to the isotropic direction")


@dataclass(frozen=True)
class CylinderSet:
    """k0 points on each of m parallel isotropic generator lines of the
    cylinder cut on the 3-sphere by the orthogonal complement of one of its
    isotropic lines."""

    p: int
    t: int
    k0: int
    generator_count: int
    points: tuple[Vec, ...]
    generators: tuple[AffineLine, ...]
    axis: AffineLine


def cylinder_set(p: int, t: int, k0: int, m: int, seed: int | None = None) -> CylinderSet:
    p = int(Prime(p))
    t %= p
    if t == 0:
        raise ConstraintError("the cylinder lives on a sphere with t != 0")
    if k0 < 1 or m < 1:
        raise ConstraintError("need k0 >= 1 and m >= 1")
    if k0 > p:
        raise ConstraintError(f"a line over F_{p} has only {p} points, asked for {k0}")
    lines = lines_on_sphere(p, 4, t)
    if not lines:
        raise ConstraintError(f"the sphere t={t} over F_{p} contains no isotropic line")
    axis = lines[0]
    sphere = Sphere(p, 4, t)
    cyl = isotropic_cylinder(axis, axis.base, sphere)
    gens = list(cyl.generators)
    if axis not in gens:
        gens.append(axis)
        gens.sort()
    if len(gens) < m:
        raise ConstraintError(
            f"cylinder offers only {len(gens)} generators, asked for {m}"
        )
    rng = random.Random(seed)
    points: list[Vec] = []
    for line in gens[:m]:
        params = range(k0) if seed is None else rng.sample(range(p), k0)
        for s in params:
            points.append(vadd(line.base, smul(s, line.direction, p), p))
    return CylinderSet(
        p=p,
        t=t,
        k0=k0,
        generator_count=m,
        points=tuple(points),
        generators=tuple(gens[:m]),
        axis=axis,
    )


# ---------------------------------------------------------------------------
# seeded random configurations (CLI construct / sweep fodder)

def random_points(p: int, dim: int, count: int, rng: random.Random) -> list[Vec]:
    p = int(Prime(p))
    return [tuple(rng.randrange(p) for _ in range(dim)) for _ in range(count)]


def random_planes(p: int, dim: int, count: int, rng: random.Random) -> list[AffinePlane]:
    p = int(Prime(p))
    out = []
    while len(out) < count:
        normal = tuple(rng.randrange(p) for _ in range(dim))
        if all(c == 0 for c in normal):
            continue
        out.append(AffinePlane(p, normal, rng.randrange(p)))
    return out


def random_lines(p: int, dim: int, count: int, rng: random.Random) -> list[AffineLine]:
    p = int(Prime(p))
    out = []
    while len(out) < count:
        direction = tuple(rng.randrange(p) for _ in range(dim))
        if all(c == 0 for c in direction):
            continue
        base = tuple(rng.randrange(p) for _ in range(dim))
        out.append(AffineLine(p, base, direction))
    return out
