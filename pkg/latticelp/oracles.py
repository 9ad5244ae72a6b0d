"""Density-zero sets given by a membership test and a counting certificate."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from sympy import isprime, primerange

Predicate = Callable[[int], bool]


@dataclass(frozen=True)
class NullOracle:
    """A null set: ``certificate(N)`` bounds |A ∩ [1, N]| and is o(N).

    ``candidates(N)`` enumerates a superset of A ∩ [1, N]; exact counts filter
    it through ``predicate``.
    """

    name: str
    predicate: Predicate
    certificate: Callable[[int], int]
    candidates: Callable[[int], Iterable[int]]

    def __contains__(self, n: int) -> bool:
        return self.predicate(n)

    def elements(self, n: int) -> list[int]:
        return sorted({k for k in self.candidates(n) if 1 <= k <= n and self.predicate(k)})

    def count(self, n: int) -> int:
        return len(self.elements(n))

    def __str__(self) -> str:
        return self.name


def _squares(n: int) -> Iterable[int]:
    return (k * k for k in range(1, math.isqrt(n) + 1))


def _powers_of_two(n: int) -> Iterable[int]:
    return (1 << k for k in range(n.bit_length()))


def _factorials(n: int) -> Iterable[int]:
    value, k = 1, 1
    while value <= n:
        yield value
        k += 1
        value *= k


def _is_factorial(n: int) -> bool:
    value, k = 1, 1
    while value < n:
        k += 1
        value *= k
    return value == n and n >= 1


def _prime_bound(n: int) -> int:
    if n < 2:
        return 0
    # π(N) <= 1.25506 N / ln N for N > 1
    return math.ceil(1.25506 * n / math.log(n))


SQUARES = NullOracle(
    "SQUARES",
    lambda n: n >= 1 and math.isqrt(n) ** 2 == n,
    lambda n: math.isqrt(max(n, 0)),
    _squares,
)
PRIMES = NullOracle("PRIMES", lambda n: bool(isprime(n)), _prime_bound, lambda n: primerange(2, n + 1))
POWERS_OF_2 = NullOracle(
    "POWERS_OF_2",
    lambda n: n >= 1 and n & (n - 1) == 0,
    lambda n: max(n, 0).bit_length(),
    _powers_of_two,
)
FACTORIALS = NullOracle(
    "FACTORIALS",
    _is_factorial,
    lambda n: sum(1 for _ in _factorials(n)),
    _factorials,
)
NONE = NullOracle("NONE", lambda n: False, lambda n: 0, lambda n: ())

BUILTINS: dict[str, NullOracle] = {o.name: o for o in (SQUARES, PRIMES, POWERS_OF_2, FACTORIALS)}


def restrict(name: str, predicate: Predicate, sources: Sequence[NullOracle]) -> NullOracle:
    """Subset of the union of ``sources`` cut out by ``predicate``.

    The certificate is the sum of the source certificates.
    """
    sources = [s for s in sources if s is not NONE]
    if not sources:
        return NONE

    def member(n: int) -> bool:
        return any(n in s for s in sources) and predicate(n)

    def certificate(n: int) -> int:
        return sum(s.certificate(n) for s in sources)

    def candidates(n: int) -> Iterable[int]:
        for s in sources:
            yield from s.candidates(n)

    return NullOracle(name, member, certificate, candidates)
