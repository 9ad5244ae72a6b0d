"""Submeasures on finite lattices."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from latticelp.errors import BadEndpoints, MissingElement, ValueOutOfRange
from latticelp.lattice import Lattice
from latticelp.rational import format_rational, parse_rational

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Submeasure:
    """Exact values on every element; the flags are always recomputed from them."""

    lattice: Lattice
    values: tuple[Fraction, ...]
    order_preserving: bool
    subadditive: bool
    orthoadditive: bool

    def __call__(self, element: str | int) -> Fraction:
        i = element if isinstance(element, int) else self.lattice.index(element)
        return self.values[i]

    def as_dict(self) -> dict[str, str]:
        return {self.lattice.label(i): format_rational(v) for i, v in enumerate(self.values)}

    def null_elements(self) -> list[int]:
        return [i for i in self.lattice.nonzero() if self.values[i] == 0]

    def same_values(self, other: Submeasure) -> bool:
        return self.values == other.values


def check_submeasure(
    lattice: Lattice,
    values: Mapping[str, Fraction | int | str],
    require_endpoints: bool = True,
) -> Submeasure:
    """Validate φ and compute its flags by exhaustive pair scans.

    A Submeasure is returned even when flags are false.
    """
    resolved: list[Fraction] = []
    for label in lattice.elements:
        if label not in values:
            raise MissingElement(f"no value for element {label!r}", element=label)
        v = parse_rational(values[label])
        if not 0 <= v <= 1:
            raise ValueOutOfRange(
                f"value {format_rational(v)} for {label!r} outside [0, 1]",
                element=label,
                value=format_rational(v),
            )
        resolved.append(v)
    if require_endpoints and (resolved[lattice.bottom] != 0 or resolved[lattice.top] != 1):
        raise BadEndpoints(
            "φ(0) must be 0 and φ(1) must be 1",
            bottom=format_rational(resolved[lattice.bottom]),
            top=format_rational(resolved[lattice.top]),
        )
    return _with_flags(lattice, tuple(resolved))


def _with_flags(lattice: Lattice, values: tuple[Fraction, ...]) -> Submeasure:
    n = lattice.size
    order_preserving = all(
        values[a] <= values[b] for a in range(n) for b in range(n) if lattice.leq(a, b)
    )
    subadditive = all(
        values[lattice.join(a, b)] <= values[a] + values[b] for a in range(n) for b in range(a, n)
    )
    orthoadditive = lattice.has_ortho and all(
        values[lattice.join(m, k)] == values[m] + values[k]
        for m in range(n)
        for k in range(n)
        if lattice.leq(k, lattice.ortho(m))
    )
    phi = Submeasure(lattice, values, order_preserving, subadditive, orthoadditive)
    logger.debug(
        "Submeasure flags: order_preserving=%s subadditive=%s orthoadditive=%s",
        order_preserving,
        subadditive,
        orthoadditive,
    )
    return phi


def from_values(lattice: Lattice, values: Mapping[int, Fraction]) -> Submeasure:
    """Build from index-keyed values without endpoint validation (derived submeasures)."""
    return _with_flags(lattice, tuple(Fraction(values[i]) for i in range(lattice.size)))
