"""Ultimately periodic subsets of the positive integers.

A set is a union of residue classes modulo m, with finitely many integers
added to or removed from the periodic part. Counting starts at 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, lcm
from typing import Callable, Iterable, Optional

from sympy import divisors

from latticelp.config import settings
from latticelp.errors import InvalidInput, UnsupportedCombination


@dataclass(frozen=True)
class UPSet:
    modulus: int
    residues: frozenset[int]
    add: frozenset[int] = frozenset()
    remove: frozenset[int] = frozenset()

    def periodic(self, n: int) -> bool:
        return n % self.modulus in self.residues

    def __contains__(self, n: int) -> bool:
        if n in self.add:
            return True
        return self.periodic(n) and n not in self.remove

    @property
    def density(self) -> Fraction:
        return Fraction(len(self.residues), self.modulus)

    @property
    def exceptions(self) -> int:
        return len(self.add) + len(self.remove)

    def count(self, n: int) -> int:
        """|A ∩ {1..n}| in O(m + |exceptions|)."""
        m = self.modulus
        total = 0
        for r in self.residues:
            if r == 0:
                total += n // m
            elif r <= n:
                total += (n - r) // m + 1
        total += sum(1 for k in self.add if k <= n)
        total -= sum(1 for k in self.remove if k <= n)
        return total

    def error_bound(self, n: int) -> float:
        """Upper bound on |count(n)/n − density|."""
        return (self.modulus + self.exceptions) / n

    def cutoff(self, eps: float) -> int:
        """Smallest k with error_bound(i) <= eps for every i > k."""
        return ceil((self.modulus + self.exceptions) / eps)

    def complement(self) -> UPSet:
        return make(
            self.modulus,
            (r for r in range(self.modulus) if r not in self.residues),
            add=self.remove,
            remove=self.add,
        )

    def __invert__(self) -> UPSet:
        return self.complement()

    def __or__(self, other: UPSet) -> UPSet:
        return combine(self, other, lambda a, b: a or b)

    def __and__(self, other: UPSet) -> UPSet:
        return combine(self, other, lambda a, b: a and b)

    def __sub__(self, other: UPSet) -> UPSet:
        return combine(self, other, lambda a, b: a and not b)

    def __xor__(self, other: UPSet) -> UPSet:
        return combine(self, other, lambda a, b: a != b)

    def is_null(self) -> bool:
        return not self.residues

    def is_empty(self) -> bool:
        return not self.residues and not self.add

    def describe(self) -> str:
        if self.modulus == 1:
            text = "ALL" if self.residues else "EMPTY"
        else:
            text = f"AP({self.modulus},{{{','.join(map(str, sorted(self.residues)))}}})"
        if self.add:
            text += f"+{{{','.join(map(str, sorted(self.add)))}}}"
        if self.remove:
            text += f"-{{{','.join(map(str, sorted(self.remove)))}}}"
        return text

    def __str__(self) -> str:
        return self.describe()


def make(
    modulus: int,
    residues: Iterable[int],
    add: Iterable[int] = (),
    remove: Iterable[int] = (),
) -> UPSet:
    """Canonical form: minimal period, exceptions reduced against it."""
    if modulus < 1:
        raise InvalidInput("modulus must be a positive integer", modulus=modulus)
    if modulus > settings.max_modulus:
        raise UnsupportedCombination(
            f"modulus {modulus} exceeds {settings.max_modulus}", modulus=modulus
        )
    pattern = frozenset(r % modulus for r in residues)
    add, remove = frozenset(add), frozenset(remove)
    if any(k < 1 for k in add | remove):
        raise InvalidInput("exceptions must be positive integers")
    target = set(add) - set(remove)
    removed = set(remove) - set(add)

    period = modulus
    for d in divisors(modulus):
        if all((r % d in pattern) == (r in pattern) for r in range(modulus)):
            period = d
            break
    reduced = frozenset(r % period for r in pattern)
    return UPSet(
        period,
        reduced,
        frozenset(k for k in target if k % period not in reduced),
        frozenset(k for k in removed if k % period in reduced),
    )


def combine(a: UPSet, b: UPSet, op: Callable[[bool, bool], bool]) -> UPSet:
    """Pointwise Boolean combination on the common period."""
    modulus = lcm(a.modulus, b.modulus)
    if modulus > settings.max_modulus:
        raise UnsupportedCombination(
            f"common modulus {modulus} exceeds {settings.max_modulus}",
            left=a.modulus,
            right=b.modulus,
        )
    residues = [
        r for r in range(modulus) if op(r % a.modulus in a.residues, r % b.modulus in b.residues)
    ]
    pattern = frozenset(residues)
    add, remove = [], []
    for n in a.add | a.remove | b.add | b.remove:
        member = op(n in a, n in b)
        periodic = n % modulus in pattern
        if member and not periodic:
            add.append(n)
        elif periodic and not member:
            remove.append(n)
    return make(modulus, residues, add, remove)


def ap(modulus: int, *residues: int) -> UPSet:
    return make(modulus, residues)


ALL = UPSet(1, frozenset({0}))
EMPTY = UPSet(1, frozenset())


def finite(elements: Iterable[int]) -> UPSet:
    return make(1, (), add=elements)


def dyadic_member(j: int) -> UPSet:
    """{n : n mod 2^j != 2^j − 1}, density 1 − 2^{−j}."""
    m = 2**j
    return make(m, (r for r in range(m) if r != m - 1))


def tail_included(a: UPSet, b: UPSet, beyond: Optional[int] = None) -> bool:
    """a ∩ (k, ∞) ⊆ b for k = ``beyond`` (default: past all exceptions)."""
    diff = a - b
    if diff.residues:
        return False
    threshold = max(a.add | a.remove | b.add | b.remove, default=0) if beyond is None else beyond
    return all(k <= threshold for k in diff.add)
