"""Shared helpers for the test suite."""

from __future__ import annotations

import random
from fractions import Fraction

from peelcount.geometry import PointSet
from peelcount.search import SearchConfig, random_point_set

# verdict lines collected by the acceptance tests, printed by conftest
ACCEPTANCE_LINES: list[str] = []


def rand_gp(n: int, seed: int, d: int = 2, resolution: int = 16) -> PointSet:
    """Seeded random general-position set."""
    return random_point_set(
        SearchConfig(n=n, seed=seed, coordinate_resolution=resolution), d=d
    )


def convex_parabola(n: int, seed: int) -> PointSet:
    """n points on the parabola y = x^2: always convex position, never
    three collinear, so the set is general-position by construction."""
    rng = random.Random(seed)
    ts: set[Fraction] = set()
    while len(ts) < n:
        ts.add(Fraction(rng.randrange(-300, 301), 16))
    return PointSet.planar([(t, t * t) for t in sorted(ts)])
