import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))


def rng_for(*key) -> random.Random:
    """Stable per-test RNG so every randomised check is reproducible."""
    return random.Random(repr(key))


def random_distinct_points(rng: random.Random, p: int, dim: int, count: int):
    pts = set()
    cap = min(count, p ** dim)
    while len(pts) < cap:
        pts.add(tuple(rng.randrange(p) for _ in range(dim)))
    return sorted(pts)


def random_raw_planes(rng: random.Random, p: int, dim: int, count: int):
    """(normal, offset) pairs, not canonicalised."""
    out = []
    while len(out) < count:
        normal = tuple(rng.randrange(p) for _ in range(dim))
        if any(normal):
            out.append((normal, rng.randrange(p)))
    return out


def random_raw_lines(rng: random.Random, p: int, dim: int, count: int):
    """(base, direction) pairs, not canonicalised."""
    out = []
    while len(out) < count:
        d = tuple(rng.randrange(p) for _ in range(dim))
        if any(d):
            out.append((tuple(rng.randrange(p) for _ in range(dim)), d))
    return out


@pytest.fixture
def rng():
    return rng_for("default")
