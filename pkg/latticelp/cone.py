"""Finitely generated convex cones: membership, lineality and facets.

Membership is an exact phase-one feasibility problem. Facets come from a
double-description pass over the dual cone, all in Fraction arithmetic.
"""

from __future__ import annotations

import logging
from fractions import Fraction
from typing import Optional, Sequence

from latticelp import linalg
from latticelp.linalg import Vector
from latticelp.simplex import solve_lp

logger = logging.getLogger(__name__)


def combination(generators: Sequence[Vector], v: Sequence[Fraction]) -> Optional[Vector]:
    """Nonnegative coefficients expressing ``v`` over ``generators``, or None."""
    if linalg.is_zero(v):
        return linalg.zero(len(generators))
    if not generators:
        return None
    columns = linalg.transpose(generators)
    result = solve_lp(columns, tuple(v))
    return result.x if result.status == "optimal" else None


def contains(generators: Sequence[Vector], v: Sequence[Fraction]) -> bool:
    return combination(generators, v) is not None


def lineality_basis(generators: Sequence[Vector], dim: int) -> tuple[Vector, ...]:
    """Basis of cone ∩ -cone: the span of generators whose negatives lie in the cone."""
    two_sided = [g for g in generators if contains(generators, linalg.scale(Fraction(-1), g))]
    return linalg.row_basis(two_sided, dim)


# ---------------------------------------------------------------------------
# Double description
# ---------------------------------------------------------------------------


def extreme_rays(constraints: Sequence[Vector], dim: int) -> list[Vector]:
    """Extreme rays of the pointed cone {h : a.h >= 0 for every constraint a}.

    ``constraints`` must span Q^dim. Rays are returned as primitive integer vectors.
    """
    if dim == 0:
        return []
    rows = [tuple(Fraction(a) for a in row) for row in constraints]

    # Seed with a simplicial cone on dim independent constraints
    space = linalg.RowSpace(dim)
    seed: list[int] = []
    for i, row in enumerate(rows):
        if space.add(row):
            seed.append(i)
            if len(seed) == dim:
                break
    if len(seed) < dim:
        raise ValueError("constraints do not span the ambient space")
    inverse = linalg.inverse([rows[i] for i in seed])
    columns = linalg.transpose(inverse)
    rays: list[tuple[Vector, frozenset[int]]] = [
        (linalg.primitive(columns[k]), frozenset(seed[:k] + seed[k + 1 :])) for k in range(dim)
    ]

    seeded = set(seed)
    for i, row in enumerate(rows):
        if i in seeded:
            continue
        values = [linalg.dot(row, ray) for ray, _ in rays]
        positive = [r for r, s in zip(rays, values) if s > 0]
        zero = [r for r, s in zip(rays, values) if s == 0]
        negative = [r for r, s in zip(rays, values) if s < 0]
        if not negative:
            rays = positive + [(ray, z | {i}) for ray, z in zero]
            continue
        created: list[tuple[Vector, frozenset[int]]] = []
        for plus_ray, plus_zero in positive:
            for minus_ray, minus_zero in negative:
                common = plus_zero & minus_zero
                if len(common) < dim - 2 or not _adjacent(rays, common, plus_ray, minus_ray):
                    continue
                a_plus = linalg.dot(row, plus_ray)
                a_minus = linalg.dot(row, minus_ray)
                ray = linalg.sub(linalg.scale(a_plus, minus_ray), linalg.scale(a_minus, plus_ray))
                created.append((linalg.primitive(ray), common | {i}))
        rays = positive + [(ray, z | {i}) for ray, z in zero] + created
        logger.debug("DD step %d: %d rays", i, len(rays))

    unique: dict[Vector, None] = {}
    for ray, _ in rays:
        unique.setdefault(ray, None)
    return list(unique)


def _adjacent(rays, common: frozenset[int], first: Vector, second: Vector) -> bool:
    for ray, zero in rays:
        if ray is first or ray is second:
            continue
        if common <= zero:
            return False
    return True


def facets(generators: Sequence[Vector], dim: int) -> list[Vector]:
    """Inequality description {y : h.y >= 0 for all h} of a full-dimensional cone."""
    return extreme_rays(generators, dim)
