"""Exact linear algebra over the rationals.

Vectors and matrices are tuples of ``Fraction``. Incremental elimination is
done here directly; inverses and ranks go through sympy.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Optional, Sequence

import sympy

Vector = tuple[Fraction, ...]


def zero(n: int) -> Vector:
    return (Fraction(0),) * n


def unit(n: int, i: int) -> Vector:
    return tuple(Fraction(1) if k == i else Fraction(0) for k in range(n))


def add(u: Sequence[Fraction], v: Sequence[Fraction]) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def sub(u: Sequence[Fraction], v: Sequence[Fraction]) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def scale(c: Fraction, v: Sequence[Fraction]) -> Vector:
    return tuple(c * a for a in v)


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def is_zero(v: Sequence[Fraction]) -> bool:
    return all(a == 0 for a in v)


def mat_vec(rows: Sequence[Sequence[Fraction]], v: Sequence[Fraction]) -> Vector:
    return tuple(dot(row, v) for row in rows)


def mat_mul(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]]) -> tuple[Vector, ...]:
    cols = list(zip(*b)) if b else []
    return tuple(tuple(dot(row, col) for col in cols) for row in a)


def identity(n: int) -> tuple[Vector, ...]:
    return tuple(unit(n, i) for i in range(n))


def transpose(rows: Sequence[Sequence[Fraction]]) -> tuple[Vector, ...]:
    return tuple(tuple(col) for col in zip(*rows))


# ---------------------------------------------------------------------------
# sympy bridge
# ---------------------------------------------------------------------------


def to_sympy(rows: Sequence[Sequence[Fraction]], ncols: Optional[int] = None) -> sympy.Matrix:
    if not rows:
        return sympy.zeros(0, ncols or 0)
    return sympy.Matrix(
        [[sympy.Rational(a.numerator, a.denominator) for a in row] for row in rows]
    )


def from_sympy(matrix: sympy.Matrix) -> tuple[Vector, ...]:
    return tuple(
        tuple(Fraction(int(sympy.Rational(matrix[i, j]).p), int(sympy.Rational(matrix[i, j]).q)) for j in range(matrix.cols))
        for i in range(matrix.rows)
    )


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    if not rows:
        return 0
    return int(to_sympy(rows).rank())


def inverse(rows: Sequence[Sequence[Fraction]]) -> tuple[Vector, ...]:
    return from_sympy(to_sympy(rows).inv())


def solve(rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> Vector:
    """Solve a square nonsingular system exactly."""
    matrix = to_sympy(rows)
    solution = matrix.LUsolve(to_sympy([[b] for b in rhs]))
    return tuple(row[0] for row in from_sympy(solution))


# ---------------------------------------------------------------------------
# Incremental row space
# ---------------------------------------------------------------------------


class RowSpace:
    """Echelon basis of a growing subspace of Q^n."""

    def __init__(self, dim: int, rows: Iterable[Sequence[Fraction]] = ()) -> None:
        self.dim = dim
        self._pivots: dict[int, list[Fraction]] = {}
        for row in rows:
            self.add(row)

    def __len__(self) -> int:
        return len(self._pivots)

    def reduce(self, v: Sequence[Fraction]) -> list[Fraction]:
        residual = list(v)
        for pivot in sorted(self._pivots):
            c = residual[pivot]
            if c:
                row = self._pivots[pivot]
                for k in range(pivot, self.dim):
                    if row[k]:
                        residual[k] -= c * row[k]
        return residual

    def contains(self, v: Sequence[Fraction]) -> bool:
        return is_zero(self.reduce(v))

    def add(self, v: Sequence[Fraction]) -> bool:
        """Insert ``v``; return False when it was already in the span."""
        residual = self.reduce(v)
        lead = next((k for k, a in enumerate(residual) if a), None)
        if lead is None:
            return False
        inv = 1 / residual[lead]
        normalized = [a * inv for a in residual]
        for pivot, row in self._pivots.items():
            c = row[lead]
            if c:
                self._pivots[pivot] = [a - c * b for a, b in zip(row, normalized)]
        self._pivots[lead] = normalized
        return True

    def basis(self) -> tuple[Vector, ...]:
        return tuple(tuple(self._pivots[p]) for p in sorted(self._pivots))


def row_basis(rows: Iterable[Sequence[Fraction]], dim: int) -> tuple[Vector, ...]:
    return RowSpace(dim, rows).basis()


def span_equal(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]], dim: int) -> bool:
    space_a, space_b = RowSpace(dim, a), RowSpace(dim, b)
    return len(space_a) == len(space_b) and all(space_a.contains(v) for v in b)


def primitive(v: Sequence[Fraction]) -> Vector:
    """Scale a nonzero rational vector to coprime integers."""
    den = 1
    for a in v:
        den = lcm(den, a.denominator)
    ints = [int(a * den) for a in v]
    g = 0
    for a in ints:
        g = gcd(g, abs(a))
    g = g or 1
    return tuple(Fraction(a // g) for a in ints)
