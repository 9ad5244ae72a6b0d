"""Exact two-phase simplex over Fractions with Bland's anti-cycling rule.

Solves ``min c.x  s.t.  A x = b, x >= 0``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal, Optional, Sequence

from latticelp.metrics import LP_SOLVES

logger = logging.getLogger(__name__)

Status = Literal["optimal", "infeasible", "unbounded"]


@dataclass(frozen=True)
class LPResult:
    status: Status
    x: Optional[tuple[Fraction, ...]] = None
    value: Optional[Fraction] = None


class SimplexTableau:
    """Dense tableau in canonical form with respect to ``basis``."""

    def __init__(self, rows: list[list[Fraction]], rhs: list[Fraction], basis: list[int]) -> None:
        self.rows = rows
        self.rhs = rhs
        self.basis = basis
        self.reduced: list[Fraction] = []
        self.objective = Fraction(0)

    @property
    def width(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    def set_objective(self, cost: Sequence[Fraction]) -> None:
        self.reduced = list(cost)
        self.objective = Fraction(0)
        for i, var in enumerate(self.basis):
            cb = cost[var]
            if cb:
                row = self.rows[i]
                for j in range(self.width):
                    if row[j]:
                        self.reduced[j] -= cb * row[j]
                self.objective += cb * self.rhs[i]

    def pivot(self, r: int, col: int) -> None:
        row = self.rows[r]
        inv = 1 / row[col]
        self.rows[r] = row = [a * inv for a in row]
        self.rhs[r] *= inv
        for i, other in enumerate(self.rows):
            if i != r and other[col]:
                c = other[col]
                self.rows[i] = [a - c * b for a, b in zip(other, row)]
                self.rhs[i] -= c * self.rhs[r]
        c = self.reduced[col]
        if c:
            self.reduced = [a - c * b for a, b in zip(self.reduced, row)]
            self.objective += c * self.rhs[r]
        self.basis[r] = col

    def bland_step(self, allowed: int) -> Literal["optimal", "unbounded", "pivoted"]:
        entering = next((j for j in range(allowed) if self.reduced[j] < 0), None)
        if entering is None:
            return "optimal"
        best: Optional[tuple[Fraction, int, int]] = None
        for i, row in enumerate(self.rows):
            if row[entering] > 0:
                key = (self.rhs[i] / row[entering], self.basis[i], i)
                if best is None or key < best:
                    best = key
        if best is None:
            return "unbounded"
        self.pivot(best[2], entering)
        return "pivoted"

    def run(self, allowed: int) -> Literal["optimal", "unbounded"]:
        while True:
            outcome = self.bland_step(allowed)
            if outcome != "pivoted":
                return outcome

    def solution(self, n: int) -> tuple[Fraction, ...]:
        x = [Fraction(0)] * n
        for i, var in enumerate(self.basis):
            if var < n:
                x[var] = self.rhs[i]
        return tuple(x)


def solve_lp(
    a: Sequence[Sequence[Fraction]],
    b: Sequence[Fraction],
    c: Optional[Sequence[Fraction]] = None,
) -> LPResult:
    """Minimize ``c.x`` over ``A x = b, x >= 0``; ``c=None`` asks for feasibility only."""
    m = len(a)
    n = len(a[0]) if m else (len(c) if c is not None else 0)
    if m == 0:
        x = (Fraction(0),) * n
        if c is not None and any(cj < 0 for cj in c):
            LP_SOLVES.labels(status="unbounded").inc()
            return LPResult("unbounded")
        LP_SOLVES.labels(status="optimal").inc()
        return LPResult("optimal", x, Fraction(0))

    # Phase one: one artificial per row after making the right-hand side nonnegative
    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    for i in range(m):
        sign = -1 if b[i] < 0 else 1
        rows.append([sign * Fraction(v) for v in a[i]] + [Fraction(int(k == i)) for k in range(m)])
        rhs.append(sign * Fraction(b[i]))
    tableau = SimplexTableau(rows, rhs, [n + i for i in range(m)])
    tableau.set_objective([Fraction(0)] * n + [Fraction(1)] * m)
    tableau.run(n + m)
    if tableau.objective > 0:
        LP_SOLVES.labels(status="infeasible").inc()
        return LPResult("infeasible")

    # Drive artificials out of the basis; drop redundant rows
    keep = []
    for i in range(len(tableau.rows)):
        if tableau.basis[i] >= n:
            col = next((j for j in range(n) if tableau.rows[i][j]), None)
            if col is None:
                continue
            tableau.pivot(i, col)
        keep.append(i)
    tableau.rows = [tableau.rows[i][:n] for i in keep]
    tableau.rhs = [tableau.rhs[i] for i in keep]
    tableau.basis = [tableau.basis[i] for i in keep]

    if c is None:
        LP_SOLVES.labels(status="optimal").inc()
        return LPResult("optimal", tableau.solution(n), Fraction(0))

    tableau.set_objective([Fraction(v) for v in c])
    if tableau.run(n) == "unbounded":
        LP_SOLVES.labels(status="unbounded").inc()
        return LPResult("unbounded")
    x = tableau.solution(n)
    LP_SOLVES.labels(status="optimal").inc()
    return LPResult("optimal", x, sum((Fraction(cj) * xj for cj, xj in zip(c, x)), Fraction(0)))
