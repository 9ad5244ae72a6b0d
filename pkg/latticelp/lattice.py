"""Finite bounded lattices: validation, law checks and the named catalog.

Elements are addressed by index internally; the order relation is stored as
bitmasks (bit ``j`` of ``up[i]`` is set iff ``i <= j``).
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, Optional

from latticelp.config import settings
from latticelp.errors import (
    BadOrtho,
    InvalidInput,
    LatticeTooLarge,
    MissingOrtho,
    NoBounds,
    NotALattice,
    NotAPartialOrder,
    UnknownElement,
    UnknownName,
)
from latticelp.models import LatticeFile, LatticeReport

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Lattice value
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Lattice:
    """Immutable finite bounded lattice with optional orthocomplement."""

    elements: tuple[str, ...]
    up: tuple[int, ...]
    down: tuple[int, ...]
    meet_table: tuple[tuple[int, ...], ...]
    join_table: tuple[tuple[int, ...], ...]
    bottom: int
    top: int
    ortho_map: Optional[tuple[int, ...]] = None
    name: str = ""

    @cached_property
    def _index(self) -> dict[str, int]:
        return {label: i for i, label in enumerate(self.elements)}

    @property
    def size(self) -> int:
        return len(self.elements)

    @property
    def has_ortho(self) -> bool:
        return self.ortho_map is not None

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise UnknownElement(f"unknown element {label!r}", element=label) from None

    def label(self, i: int) -> str:
        return self.elements[i]

    def leq(self, i: int, j: int) -> bool:
        return bool(self.up[i] >> j & 1)

    def meet(self, i: int, j: int) -> int:
        return self.meet_table[i][j]

    def join(self, i: int, j: int) -> int:
        return self.join_table[i][j]

    def ortho(self, i: int) -> int:
        if self.ortho_map is None:
            raise MissingOrtho(f"lattice {self.name or '<anonymous>'} has no orthocomplement")
        return self.ortho_map[i]

    def below(self, i: int) -> list[int]:
        return [j for j in range(self.size) if self.down[i] >> j & 1]

    def nonzero(self) -> list[int]:
        return [i for i in range(self.size) if i != self.bottom]

    def atoms(self) -> list[int]:
        return [
            i
            for i in self.nonzero()
            if all(j in (i, self.bottom) for j in self.below(i))
        ]

    def same_order(self, other: Lattice) -> bool:
        """True when ``other`` has the same labels and the same order relation."""
        if set(self.elements) != set(other.elements):
            return False
        return all(
            self.leq(i, j) == other.leq(other.index(a), other.index(b))
            for i, a in enumerate(self.elements)
            for j, b in enumerate(self.elements)
        )

    def __repr__(self) -> str:
        return f"Lattice({self.name or 'anonymous'}, {self.size} elements)"


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------


def validate(
    elements: Iterable[str],
    order: Iterable[tuple[str, str]],
    ortho: Optional[dict[str, str]] = None,
    name: str = "",
) -> Lattice:
    """Close a generating order relation and build meet/join tables.

    Raises NotAPartialOrder, NoBounds, NotALattice or BadOrtho.
    """
    labels = tuple(elements)
    if not labels:
        raise InvalidInput("a lattice needs at least one element")
    if len(set(labels)) != len(labels):
        raise InvalidInput("duplicate element identifiers", elements=list(labels))
    n = len(labels)
    if n > settings.lattice_cap:
        raise LatticeTooLarge(
            f"{n} elements exceed the cap of {settings.lattice_cap}", size=n
        )
    index = {label: i for i, label in enumerate(labels)}

    def lookup(label: str) -> int:
        if label not in index:
            raise UnknownElement(f"unknown element {label!r}", element=label)
        return index[label]

    up = [1 << i for i in range(n)]
    for lo, hi in order:
        up[lookup(lo)] |= 1 << lookup(hi)
    # Warshall over bitsets
    for k in range(n):
        bit = 1 << k
        row = up[k]
        for i in range(n):
            if up[i] & bit:
                up[i] |= row
    down = [0] * n
    for i in range(n):
        for j in range(n):
            if up[i] >> j & 1:
                down[j] |= 1 << i
    for i, j in combinations(range(n), 2):
        if up[i] >> j & 1 and up[j] >> i & 1:
            raise NotAPartialOrder(
                f"{labels[i]} and {labels[j]} are mutually below each other",
                pair=[labels[i], labels[j]],
            )

    everything = (1 << n) - 1
    bottoms = [i for i in range(n) if up[i] == everything]
    tops = [i for i in range(n) if down[i] == everything]
    if not bottoms or not tops:
        raise NoBounds("order has no global minimum or maximum")

    meet_table = [[0] * n for _ in range(n)]
    join_table = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            meet_table[i][j] = meet_table[j][i] = _extremum(down, down[i] & down[j], labels, (i, j), "meet")
            join_table[i][j] = join_table[j][i] = _extremum(up, up[i] & up[j], labels, (i, j), "join")

    ortho_map = _validate_ortho(labels, index, up, meet_table, join_table, bottoms[0], tops[0], ortho)
    lattice = Lattice(
        elements=labels,
        up=tuple(up),
        down=tuple(down),
        meet_table=tuple(map(tuple, meet_table)),
        join_table=tuple(map(tuple, join_table)),
        bottom=bottoms[0],
        top=tops[0],
        ortho_map=ortho_map,
        name=name,
    )
    logger.debug("Validated lattice %s with %d elements", name or "<anonymous>", n)
    return lattice


def _extremum(cones: list[int], candidates: int, labels, pair, kind: str) -> int:
    # the extremum is the candidate whose own cone contains every candidate
    for k in range(len(labels)):
        if candidates >> k & 1 and cones[k] & candidates == candidates:
            return k
    raise NotALattice(
        f"{labels[pair[0]]} and {labels[pair[1]]} have no {kind}",
        pair=[labels[pair[0]], labels[pair[1]]],
        missing=kind,
    )


def _validate_ortho(labels, index, up, meet_table, join_table, bottom, top, ortho):
    if ortho is None:
        return None
    n = len(labels)
    mapping = [0] * n
    for label in labels:
        if label not in ortho:
            raise BadOrtho(f"orthocomplement undefined on {label!r}", element=label, law="total")
        target = ortho[label]
        if target not in index:
            raise UnknownElement(f"unknown element {target!r}", element=target)
        mapping[index[label]] = index[target]
    for i in range(n):
        o = mapping[i]
        if mapping[o] != i:
            raise BadOrtho(f"ortho is not an involution at {labels[i]}", element=labels[i], law="involution")
        if meet_table[i][o] != bottom:
            raise BadOrtho(f"{labels[i]} meets its complement above 0", element=labels[i], law="meet")
        if join_table[i][o] != top:
            raise BadOrtho(f"{labels[i]} joins its complement below 1", element=labels[i], law="join")
        for j in range(n):
            if up[i] >> j & 1 and not up[mapping[j]] >> o & 1:
                raise BadOrtho(f"ortho is not antitone at {labels[i]} <= {labels[j]}", element=labels[i], law="antitone")
    return tuple(mapping)


def from_file(model: LatticeFile, name: str = "") -> Lattice:
    return validate(model.elements, model.order, model.ortho, name=name)


def serialize(lattice: Lattice) -> LatticeFile:
    """Emit the covering pairs, which generate the order."""
    pairs: list[tuple[str, str]] = []
    for i in range(lattice.size):
        for j in range(lattice.size):
            if i == j or not lattice.leq(i, j):
                continue
            between = lattice.up[i] & lattice.down[j] & ~(1 << i) & ~(1 << j)
            if not between:
                pairs.append((lattice.label(i), lattice.label(j)))
    ortho = None
    if lattice.ortho_map is not None:
        ortho = {lattice.label(i): lattice.label(o) for i, o in enumerate(lattice.ortho_map)}
    return LatticeFile(elements=list(lattice.elements), order=pairs, ortho=ortho)


# ---------------------------------------------------------------------------
# Law checks
# ---------------------------------------------------------------------------


def law_holds(lattice: Lattice, law: str, witness: list[str]) -> bool:
    """Re-evaluate a named law on a witness tuple."""
    ids = [lattice.index(w) for w in witness]
    m, j = lattice.meet, lattice.join
    if law == "modular":
        x, y, z = ids
        return not lattice.leq(x, z) or j(x, m(y, z)) == m(j(x, y), z)
    if law == "distributive":
        x, y, z = ids
        return m(x, j(y, z)) == j(m(x, y), m(x, z))
    if law == "orthomodular":
        x, y = ids
        return not lattice.leq(x, y) or y == j(x, m(y, lattice.ortho(x)))
    raise InvalidInput(f"unknown law {law!r}")


def check_laws(lattice: Lattice) -> LatticeReport:
    """Exhaustive scan of modularity, distributivity and, with ortho, orthomodularity."""
    n = lattice.size
    m, j = lattice.meet, lattice.join
    failures: dict[str, list[str]] = {}

    for x in range(n):
        for y in range(n):
            for z in range(n):
                if "distributive" not in failures and m(x, j(y, z)) != j(m(x, y), m(x, z)):
                    failures["distributive"] = [lattice.label(k) for k in (x, y, z)]
                if "modular" not in failures and lattice.leq(x, z) and j(x, m(y, z)) != m(j(x, y), z):
                    failures["modular"] = [lattice.label(k) for k in (x, y, z)]
            if len(failures) == 2:
                break

    is_ortho = None
    is_om = None
    if lattice.has_ortho:
        is_ortho = True
        is_om = True
        for x in range(n):
            for y in range(n):
                if lattice.leq(x, y) and y != j(x, m(y, lattice.ortho(x))):
                    is_om = False
                    failures.setdefault("orthomodular", [lattice.label(x), lattice.label(y)])
                    break
            if not is_om:
                break

    first = next(
        (law for law in ("orthomodular", "modular", "distributive") if law in failures), None
    )
    return LatticeReport(
        is_modular="modular" not in failures,
        is_distributive="distributive" not in failures,
        is_ortholattice=is_ortho,
        is_orthomodular=is_om,
        counterexample=failures.get(first) if first else None,
        counterexample_law=first,
    )


def check_orthomodular(lattice: Lattice) -> LatticeReport:
    if not lattice.has_ortho:
        raise MissingOrtho(f"lattice {lattice.name or '<anonymous>'} has no orthocomplement")
    return check_laws(lattice)


def is_orthomodular(lattice: Lattice) -> bool:
    return lattice.has_ortho and bool(check_laws(lattice).is_orthomodular)


def is_boolean(lattice: Lattice) -> bool:
    return lattice.has_ortho and check_laws(lattice).is_distributive


def join_primes(lattice: Lattice) -> list[int]:
    """Nonzero a with a <= x v y implying a <= x or a <= y; each gives a 0-1 homomorphism."""
    result = []
    for a in lattice.nonzero():
        if all(
            not lattice.leq(a, lattice.join(x, y)) or lattice.leq(a, x) or lattice.leq(a, y)
            for x in range(lattice.size)
            for y in range(x, lattice.size)
        ):
            result.append(a)
    return result


# ---------------------------------------------------------------------------
# Catalog
# ---------------------------------------------------------------------------

_PARAMETRIC = re.compile(r"^(chain|boolean)_(\d+)$")


def catalog(name: str) -> Lattice:
    """Named lattices: chain_n, boolean_n, m3, n5, mo2, o6."""
    match = _PARAMETRIC.match(name)
    if match:
        kind, size = match.group(1), int(match.group(2))
        if kind == "chain":
            return _chain(size, name)
        return _boolean(size, name)
    builders = {"m3": _m3, "n5": _n5, "mo2": _mo2, "o6": _o6}
    if name not in builders:
        raise UnknownName(f"no catalog lattice named {name!r}", name=name)
    return builders[name]()


def catalog_names() -> list[str]:
    return ["chain_n", "boolean_n", "m3", "n5", "mo2", "o6"]


def _chain(n: int, name: str) -> Lattice:
    if n < 2:
        raise UnknownName("chains need at least 2 elements", name=name)
    labels = ["0"] + [f"c{k}" for k in range(1, n - 1)] + ["1"]
    order = list(zip(labels, labels[1:]))
    ortho = {"0": "1", "1": "0"} if n == 2 else None
    return validate(labels, order, ortho, name=name)


def _boolean(n: int, name: str) -> Lattice:
    if n < 1 or 2**n > settings.lattice_cap:
        raise UnknownName(f"boolean_{n} is outside the supported range", name=name)
    letters = [chr(ord("A") + k) for k in range(n)]
    full = (1 << n) - 1
    masks = sorted(range(1 << n), key=lambda s: (bin(s).count("1"), [k for k in range(n) if s >> k & 1]))

    def label(mask: int) -> str:
        if mask == 0:
            return "0"
        if mask == full:
            return "1"
        return "".join(letters[k] for k in range(n) if mask >> k & 1)

    labels = [label(s) for s in masks]
    order = [
        (label(s), label(s | 1 << k)) for s in masks for k in range(n) if not s >> k & 1
    ]
    ortho = {label(s): label(full ^ s) for s in masks}
    return validate(labels, order, ortho, name=name)


def _m3() -> Lattice:
    return validate(
        ["0", "A", "B", "C", "1"],
        [("0", "A"), ("0", "B"), ("0", "C"), ("A", "1"), ("B", "1"), ("C", "1")],
        name="m3",
    )


def _n5() -> Lattice:
    return validate(
        ["0", "A", "B", "C", "1"],
        [("0", "A"), ("0", "B"), ("B", "C"), ("A", "1"), ("C", "1")],
        name="n5",
    )


def _mo2() -> Lattice:
    atoms = ["a", "a'", "b", "b'"]
    return validate(
        ["0", *atoms, "1"],
        [("0", x) for x in atoms] + [(x, "1") for x in atoms],
        {"0": "1", "1": "0", "a": "a'", "a'": "a", "b": "b'", "b'": "b"},
        name="mo2",
    )


def _o6() -> Lattice:
    return validate(
        ["0", "a", "b", "b'", "a'", "1"],
        [("0", "a"), ("a", "b"), ("b", "1"), ("0", "b'"), ("b'", "a'"), ("a'", "1")],
        {"0": "1", "1": "0", "a": "a'", "a'": "a", "b": "b'", "b'": "b"},
        name="o6",
    )
