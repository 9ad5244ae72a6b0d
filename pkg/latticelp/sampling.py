"""Deterministic and seeded sample vectors for the property checks."""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from typing import Optional

import numpy as np

from latticelp.config import settings
from latticelp.linalg import Vector
from latticelp.quotient import QuotientSpace, XVector


def make_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


def sign_patterns(dim: int, cap: Optional[int] = None) -> list[Vector]:
    """All nonzero ±1/0 patterns; beyond ``cap`` dimensions only ±units and ±pairs."""
    cap = settings.pattern_dim_cap if cap is None else cap
    one, zero = Fraction(1), Fraction(0)
    if dim <= cap:
        return [
            tuple(Fraction(s) for s in signs)
            for signs in product((0, 1, -1), repeat=dim)
            if any(signs)
        ]
    patterns: list[Vector] = []
    for i in range(dim):
        for s in (one, -one):
            patterns.append(tuple(s if k == i else zero for k in range(dim)))
    for i in range(dim):
        for j in range(i + 1, dim):
            for si, sj in ((one, one), (one, -one)):
                patterns.append(
                    tuple(si if k == i else sj if k == j else zero for k in range(dim))
                )
    return patterns


def random_rationals(rng: np.random.Generator, dim: int, count: int) -> list[Vector]:
    numerators = rng.integers(-6, 7, size=(count, dim))
    denominators = rng.integers(1, 5, size=(count, dim))
    return [
        tuple(Fraction(int(n), int(d)) for n, d in zip(row_n, row_d))
        for row_n, row_d in zip(numerators, denominators)
    ]


def sample_vectors(
    space: QuotientSpace, seed: int = 0, count: Optional[int] = None
) -> list[XVector]:
    """Sign patterns on the X basis followed by ``count`` seeded rational vectors."""
    count = settings.sample_size if count is None else count
    coords = sign_patterns(space.x_dim) + random_rationals(make_rng(seed), space.x_dim, count)
    return [space.from_coords(c) for c in coords]
