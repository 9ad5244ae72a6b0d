"""The quotient space X = c00(L)/Δ, its preorder cone and disjoint refinement."""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence, Union

from latticelp import cone, linalg
from latticelp.errors import (
    DimensionMismatch,
    NonTermination,
    NotOrthomodular,
    ParseError,
)
from latticelp.lattice import Lattice, is_orthomodular
from latticelp.linalg import Vector
from latticelp.rational import format_rational

logger = logging.getLogger(__name__)

Element = Union[str, int]


# ---------------------------------------------------------------------------
# Vectors
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class XVector:
    """A formal sum of a⊗A terms together with its coordinates in X.

    Equality is equality in X, so two different representations of the
    same class compare equal.
    """

    terms: tuple[tuple[Fraction, str], ...]
    coords: Vector

    def __eq__(self, other: object) -> bool:
        return isinstance(other, XVector) and self.coords == other.coords

    def __hash__(self) -> int:
        return hash(self.coords)

    def _check(self, other: XVector) -> None:
        if len(self.coords) != len(other.coords):
            raise DimensionMismatch(
                f"vectors of dimension {len(self.coords)} and {len(other.coords)}",
                left=len(self.coords),
                right=len(other.coords),
            )

    def __add__(self, other: XVector) -> XVector:
        self._check(other)
        return XVector(self.terms + other.terms, linalg.add(self.coords, other.coords))

    def __neg__(self) -> XVector:
        return self.scale(Fraction(-1))

    def __sub__(self, other: XVector) -> XVector:
        return self + (-other)

    def scale(self, c: Fraction | int) -> XVector:
        c = Fraction(c)
        return XVector(tuple((c * a, e) for a, e in self.terms), linalg.scale(c, self.coords))

    def is_zero(self) -> bool:
        return linalg.is_zero(self.coords)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{format_rational(a)}*{e}" for a, e in self.terms)


# ---------------------------------------------------------------------------
# Quotient space
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class QuotientSpace:
    lattice: Lattice
    delta_basis: tuple[Vector, ...]
    basis_elements: tuple[int, ...]
    coord_matrix: tuple[Vector, ...]
    cone_generators: tuple[Vector, ...]

    @property
    def ambient_dim(self) -> int:
        return self.lattice.size

    @property
    def x_dim(self) -> int:
        return len(self.basis_elements)

    @property
    def basis_labels(self) -> list[str]:
        return [self.lattice.label(i) for i in self.basis_elements]

    def _idx(self, element: Element) -> int:
        return element if isinstance(element, int) else self.lattice.index(element)

    def q(self, element: Element) -> Vector:
        """Coordinates of q(e_A)."""
        i = self._idx(element)
        return tuple(row[i] for row in self.coord_matrix)

    def coord_map(self, ambient: Sequence[Fraction]) -> Vector:
        if len(ambient) != self.ambient_dim:
            raise DimensionMismatch(
                f"ambient vector of length {len(ambient)}, expected {self.ambient_dim}",
                got=len(ambient),
                expected=self.ambient_dim,
            )
        return linalg.mat_vec(self.coord_matrix, ambient)

    def vector(self, terms: Iterable[tuple[Fraction | int | str, Element]]) -> XVector:
        """Build Σ a_i⊗A_i from (coefficient, element) pairs."""
        clean: list[tuple[Fraction, str]] = []
        coords = linalg.zero(self.x_dim)
        for coefficient, element in terms:
            a = Fraction(coefficient)
            i = self._idx(element)
            clean.append((a, self.lattice.label(i)))
            coords = linalg.add(coords, linalg.scale(a, self.q(i)))
        return XVector(tuple(clean), coords)

    def unit(self, element: Element) -> XVector:
        return self.vector([(1, element)])

    def from_coords(self, coords: Sequence[Fraction]) -> XVector:
        if len(coords) != self.x_dim:
            raise DimensionMismatch(
                f"coordinate vector of length {len(coords)}, expected {self.x_dim}",
                got=len(coords),
                expected=self.x_dim,
            )
        return XVector(
            tuple((Fraction(c), self.lattice.label(b)) for c, b in zip(coords, self.basis_elements) if c),
            tuple(Fraction(c) for c in coords),
        )

    def zero(self) -> XVector:
        return XVector((), linalg.zero(self.x_dim))

    @cached_property
    def facets(self) -> list[Vector]:
        """Normals h with C = {y : h.y >= 0}."""
        return cone.facets(self.cone_generators, self.x_dim)

    @cached_property
    def lineality(self) -> tuple[Vector, ...]:
        return cone.lineality_basis(self.cone_generators, self.x_dim)


def build(lattice: Lattice) -> QuotientSpace:
    """Row-reduce Δ exactly, pick the lowest-index complement basis and emit cone generators."""
    n = lattice.size
    delta = linalg.RowSpace(n)
    delta.add(linalg.unit(n, lattice.bottom))
    for a in range(n):
        for b in range(a + 1, n):
            row = [Fraction(0)] * n
            row[a] += 1
            row[b] += 1
            row[lattice.join(a, b)] -= 1
            row[lattice.meet(a, b)] -= 1
            if any(row):
                delta.add(row)
    delta_basis = delta.basis()

    extended = linalg.RowSpace(n, delta_basis)
    basis: list[int] = []
    for i in range(n):
        if len(extended) == n:
            break
        if extended.add(linalg.unit(n, i)):
            basis.append(i)

    r, k = len(delta_basis), len(basis)
    if k:
        full = list(delta_basis) + [linalg.unit(n, b) for b in basis]
        inverse_t = linalg.inverse(linalg.transpose(full))
        coord_matrix = tuple(inverse_t[r:])
    else:
        coord_matrix = ()

    def q(i: int) -> Vector:
        return tuple(row[i] for row in coord_matrix)

    generators: dict[Vector, None] = {}
    for a in range(n):
        generators.setdefault(q(a), None)
    for a in range(n):
        for b in range(n):
            if a != b and lattice.leq(a, b):
                generators.setdefault(linalg.sub(q(b), q(a)), None)
    cone_generators = tuple(g for g in generators if not linalg.is_zero(g))

    space = QuotientSpace(
        lattice=lattice,
        delta_basis=delta_basis,
        basis_elements=tuple(basis),
        coord_matrix=coord_matrix,
        cone_generators=cone_generators,
    )
    logger.info(
        "Built X for %s: ambient %d, rank Δ %d, dim X %d, %d cone generators",
        lattice.name or "<anonymous>",
        n,
        r,
        k,
        len(cone_generators),
    )
    return space


# ---------------------------------------------------------------------------
# Cone preorder
# ---------------------------------------------------------------------------


def cone_contains(space: QuotientSpace, v: XVector | Sequence[Fraction]) -> bool:
    """Exact test of v ∈ C."""
    coords = v.coords if isinstance(v, XVector) else tuple(v)
    if len(coords) != space.x_dim:
        raise DimensionMismatch(
            f"vector of dimension {len(coords)} in a space of dimension {space.x_dim}",
            got=len(coords),
            expected=space.x_dim,
        )
    return cone.contains(space.cone_generators, coords)


def leq(space: QuotientSpace, x: XVector, y: XVector) -> bool:
    """x ⊑ y iff y − x ∈ C."""
    return cone_contains(space, y - x)


# ---------------------------------------------------------------------------
# Disjoint refinement
# ---------------------------------------------------------------------------


def disjointify(space: QuotientSpace, x: XVector) -> XVector:
    """Rewrite x with pairwise-disjoint elements using a⊗A + b⊗B = a⊗(A∧D⊥) + (a+b)⊗D + b⊗(B∧D⊥), D = A∧B."""
    lattice = space.lattice
    if not is_orthomodular(lattice):
        raise NotOrthomodular(f"lattice {lattice.name or '<anonymous>'} is not orthomodular")

    terms = _merge([(a, lattice.index(e)) for a, e in x.terms], lattice.bottom)
    guard = lattice.size**2
    steps = 0
    while True:
        pair = next(
            (
                (i, j)
                for i in range(len(terms))
                for j in range(i + 1, len(terms))
                if lattice.meet(terms[i][1], terms[j][1]) != lattice.bottom
            ),
            None,
        )
        if pair is None:
            break
        steps += 1
        if steps > guard:
            raise NonTermination(
                f"refinement exceeded {guard} splits", steps=steps, vector=str(x)
            )
        i, j = pair
        (a, first), (b, second) = terms[i], terms[j]
        common = lattice.meet(first, second)
        rest = lattice.ortho(common)
        split = (
            terms[:i]
            + [(a, lattice.meet(first, rest)), (a + b, common)]
            + terms[i + 1 : j]
            + [(b, lattice.meet(second, rest))]
            + terms[j + 1 :]
        )
        terms = _merge(split, lattice.bottom)

    result = space.vector([(a, e) for a, e in terms])
    if result.coords != x.coords:
        raise NonTermination("refinement changed the class of the vector", vector=str(x))
    logger.debug("Disjointified %s into %s after %d splits", x, result, steps)
    return result


def _merge(terms: list[tuple[Fraction, int]], bottom: int) -> list[tuple[Fraction, int]]:
    merged: dict[int, Fraction] = {}
    for a, e in terms:
        if e == bottom:
            continue
        merged[e] = merged.get(e, Fraction(0)) + a
    return [(a, e) for e, a in merged.items() if a != 0]


# ---------------------------------------------------------------------------
# Vector expressions
# ---------------------------------------------------------------------------

_TERM = re.compile(r"\s*([+-]?\s*\d+(?:\s*/\s*\d+)?)\s*\*\s*([^\s+*]+)\s*")
_SEPARATOR = re.compile(r"\s*([+-])")


def parse_vector(space: QuotientSpace, text: str) -> XVector:
    """Parse ``"1*A + -1/3*B"``; a bare ``-`` between terms negates the next term."""
    position = 0
    sign = 1
    terms: list[tuple[Fraction, str]] = []
    while True:
        match = _TERM.match(text, position)
        if not match:
            raise ParseError("expected a term 'rational*element'", position, text=text)
        raw = re.sub(r"\s+", "", match.group(1))
        num, _, den = raw.partition("/")
        if den and int(den) == 0:
            raise ParseError("zero denominator", match.start(1), text=text)
        coefficient = Fraction(int(num), int(den) if den else 1)
        element = match.group(2)
        if element not in space.lattice.elements:
            raise ParseError(f"unknown element {element!r}", match.start(2), text=text)
        terms.append((sign * coefficient, element))
        position = match.end()
        if position == len(text):
            break
        separator = _SEPARATOR.match(text, position)
        if not separator:
            raise ParseError("expected '+' between terms", position, text=text)
        sign = 1 if separator.group(1) == "+" else -1
        position = separator.end()
    return space.vector(terms)
