"""Exact natural density on ultimately periodic sets modulo null sets.

A DensitySet is an ultimately periodic core corrected by two null oracles:
``plus`` lies outside the core and is added, ``minus`` lies inside and is
removed. Density, equivalence and the order modulo null sets are decided on
the core alone.
"""

from __future__ import annotations

import ast
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from itertools import combinations
from typing import Callable, Iterable, Optional, Sequence

from latticelp import upset
from latticelp.config import settings
from latticelp.errors import (
    AtomExplosion,
    InvalidInput,
    NotIncreasing,
    ParseError,
    ScheduleInvalid,
    UnsupportedCombination,
)
from latticelp.models import AlgebraReport, DensityReport, DiagonalJoinReport, DSystemReport
from latticelp.oracles import BUILTINS, NONE, NullOracle, restrict
from latticelp.rational import format_rational
from latticelp.sampling import make_rng
from latticelp.upset import UPSet

logger = logging.getLogger(__name__)

DEFAULT_HORIZONS = (10**3, 10**4, 10**5)


# ---------------------------------------------------------------------------
# Sets
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DensitySet:
    core: UPSet
    plus: NullOracle = NONE
    minus: NullOracle = NONE
    label: str = ""

    def __contains__(self, n: int) -> bool:
        if n in self.plus:
            return True
        if n in self.minus:
            return False
        return n in self.core

    @property
    def density(self) -> Fraction:
        return self.core.density

    @property
    def is_periodic(self) -> bool:
        return self.plus is NONE and self.minus is NONE

    def count(self, n: int) -> int:
        return self.core.count(n) + self.plus.count(n) - self.minus.count(n)

    def error_bound(self, n: int) -> float:
        """|count(n)/n − density| <= core bound + oracle certificates / n."""
        return self.core.error_bound(n) + (self.plus.certificate(n) + self.minus.certificate(n)) / n

    def __or__(self, other: DensitySet) -> DensitySet:
        return _combine(self, other, "|", lambda a, b: a | b, lambda a, b: a or b)

    def __and__(self, other: DensitySet) -> DensitySet:
        return _combine(self, other, "&", lambda a, b: a & b, lambda a, b: a and b)

    def __sub__(self, other: DensitySet) -> DensitySet:
        return _combine(self, other, "\\", lambda a, b: a - b, lambda a, b: a and not b)

    def __invert__(self) -> DensitySet:
        core = ~self.core
        label = f"~{self}"

        def member(n: int) -> bool:
            return n not in self

        sources = [self.plus, self.minus]
        return DensitySet(
            core,
            restrict(label, lambda n: member(n) and n not in core, sources),
            restrict(label, lambda n: n in core and not member(n), sources),
            label,
        )

    def __str__(self) -> str:
        return self.label or self.core.describe()


def _combine(a: DensitySet, b: DensitySet, symbol: str, core_op, bool_op) -> DensitySet:
    core = core_op(a.core, b.core)
    label = f"({a}{symbol}{b})"

    def member(n: int) -> bool:
        return bool_op(n in a, n in b)

    # Outside the four oracles both operands agree with their cores
    sources = [a.plus, a.minus, b.plus, b.minus]
    return DensitySet(
        core,
        restrict(label, lambda n: member(n) and n not in core, sources),
        restrict(label, lambda n: n in core and not member(n), sources),
        label,
    )


def from_upset(core: UPSet, label: str = "") -> DensitySet:
    return DensitySet(core, label=label or core.describe())


def from_oracle(oracle: NullOracle) -> DensitySet:
    return DensitySet(upset.EMPTY, oracle, NONE, oracle.name)


@dataclass(frozen=True)
class IndicatorSet:
    """A set known only through membership; it need not have a density."""

    name: str
    predicate: Callable[[int], bool]

    def __contains__(self, n: int) -> bool:
        return self.predicate(n)

    def count(self, n: int) -> int:
        return sum(1 for k in range(1, n + 1) if self.predicate(k))

    def __str__(self) -> str:
        return self.name


# n ∈ [4^k, 2·4^k) exactly when n has an odd number of binary digits
BLOCKS_OF_DOUBLING = IndicatorSet("BLOCKS_OF_DOUBLING", lambda n: n >= 1 and n.bit_length() % 2 == 1)
INDICATORS = {BLOCKS_OF_DOUBLING.name: BLOCKS_OF_DOUBLING}


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

_BINARY = {
    ast.BitOr: DensitySet.__or__,
    ast.BitAnd: DensitySet.__and__,
    ast.Sub: DensitySet.__sub__,
}


def parse_set(expr: str) -> DensitySet:
    """Parse AP(m, r, ...), AP(m, {r, ...}), named sets and | & ~ \\ (or -)."""
    source = expr.replace("\\", "-")
    offset = len(source) - len(source.lstrip())
    try:
        tree = ast.parse(source.strip(), mode="eval")
    except SyntaxError as exc:
        position = _syntax_position(source.strip(), exc) + offset
        raise ParseError(f"invalid set expression: {exc.msg}", position=position) from exc
    result = _eval_node(tree.body, offset)
    return DensitySet(result.core, result.plus, result.minus, expr.strip())


_DANGLING = ("|", "&", "-", "~", "(", ",", "{")


def _syntax_position(source: str, exc: SyntaxError) -> int:
    # the parser reports a trailing operator at the start of the expression
    if source.endswith(_DANGLING) or source.count("(") > source.count(")"):
        return len(source)
    return min(max((exc.offset or 1) - 1, 0), len(source))


def _eval_node(node: ast.AST, offset: int) -> DensitySet:
    position = getattr(node, "col_offset", 0) + offset
    if isinstance(node, ast.BinOp):
        op = _BINARY.get(type(node.op))
        if op is None:
            raise ParseError(f"unsupported operator {type(node.op).__name__}", position=position)
        return op(_eval_node(node.left, offset), _eval_node(node.right, offset))
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.Invert):
        return ~_eval_node(node.operand, offset)
    if isinstance(node, ast.Name):
        return _named(node.id, position)
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id == "AP":
        return _progression(node, position)
    raise ParseError(f"unsupported expression {type(node).__name__}", position=position)


def _named(name: str, position: int) -> DensitySet:
    if name == "ALL":
        return from_upset(upset.ALL)
    if name == "EMPTY":
        return from_upset(upset.EMPTY)
    if name in BUILTINS:
        return from_oracle(BUILTINS[name])
    if name in INDICATORS:
        raise UnsupportedCombination(f"{name} has no natural density", name=name)
    raise ParseError(f"unknown set {name!r}", position=position)


def _integer(node: ast.AST, offset: int) -> int:
    if isinstance(node, ast.Constant) and type(node.value) is int:
        return node.value
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
        return -_integer(node.operand, offset)
    raise ParseError("expected an integer", position=getattr(node, "col_offset", 0) + offset)


def _progression(node: ast.Call, position: int) -> DensitySet:
    if not node.args or node.keywords:
        raise ParseError("AP expects a modulus and residues", position=position)
    if len(node.args) < 2:
        raise ParseError("AP expects at least one residue", position=position)
    offset = position - node.col_offset
    modulus = _integer(node.args[0], offset)
    if modulus < 1:
        raise ParseError("modulus must be positive", position=node.args[0].col_offset + offset)
    residues: list[int] = []
    for arg in node.args[1:]:
        if isinstance(arg, ast.Set):
            residues.extend(_integer(e, offset) for e in arg.elts)
        else:
            residues.append(_integer(arg, offset))
    return from_upset(upset.make(modulus, residues))


# ---------------------------------------------------------------------------
# Density, counting, order modulo null
# ---------------------------------------------------------------------------


def density(s: DensitySet) -> Fraction:
    return s.density


def count(s: DensitySet | UPSet | IndicatorSet, n: int) -> int:
    if n < 0:
        raise InvalidInput("horizon must be nonnegative", horizon=n)
    return s.count(n)


def equiv(a: DensitySet, b: DensitySet) -> bool:
    """Symmetric difference is null."""
    return (a.core ^ b.core).is_null()


def leq_mod_null(a: DensitySet, b: DensitySet) -> bool:
    """a ⊆ b ∪ N for some null N."""
    return (a.core - b.core).is_null()


def density_report(
    s: DensitySet, horizons: Sequence[int] = DEFAULT_HORIZONS
) -> DensityReport:
    counts = [(n, s.count(n)) for n in horizons]
    report = DensityReport(
        expression=str(s),
        density=format_rational(s.density),
        horizon_counts=counts,
        error_bounds=[s.error_bound(n) for n in horizons],
    )
    logger.info("d(%s) = %s", s, report.density)
    return report


# ---------------------------------------------------------------------------
# Generated algebras
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GeneratedAlgebra:
    """Finite algebra modulo null: members are unions of atoms, indexed by bitmask."""

    generators: tuple[str, ...]
    atoms: tuple[UPSet, ...]

    @property
    def size(self) -> int:
        return 1 << len(self.atoms)

    @property
    def densities(self) -> tuple[Fraction, ...]:
        return tuple(a.density for a in self.atoms)

    def member(self, mask: int) -> UPSet:
        return reduce(
            lambda acc, i: acc | self.atoms[i],
            (i for i in range(len(self.atoms)) if mask >> i & 1),
            upset.EMPTY,
        )

    def density_of(self, mask: int) -> Fraction:
        return sum((d for i, d in enumerate(self.densities) if mask >> i & 1), Fraction(0))


def generate_algebra(family: Sequence[DensitySet], cap: Optional[int] = None) -> GeneratedAlgebra:
    """Atoms are the non-null Boolean combinations of the cores."""
    cap = settings.atom_cap if cap is None else cap
    atoms = [upset.ALL]
    for s in family:
        refined = []
        for atom in atoms:
            for piece in (atom & s.core, atom - s.core):
                if not piece.is_null():
                    refined.append(piece)
        if len(refined) > cap:
            raise AtomExplosion(f"{len(refined)} atoms exceed the cap of {cap}", atoms=len(refined), cap=cap)
        atoms = refined
    algebra = GeneratedAlgebra(tuple(str(s) for s in family), tuple(atoms))
    logger.info("Generated algebra: %d atoms, %d members", len(atoms), algebra.size)
    return algebra


def check_algebra(algebra: GeneratedAlgebra, seed: int = 0, max_pairs: int = 20_000) -> AlgebraReport:
    """Verify d̂ on actual set operations: modularity on every pair, additivity on disjoint ones."""
    members = [algebra.member(mask) for mask in range(algebra.size)]
    pairs: Iterable[tuple[int, int]]
    total = algebra.size * (algebra.size - 1) // 2
    if total <= max_pairs:
        pairs = combinations(range(algebra.size), 2)
    else:
        rng = make_rng(seed)
        drawn = rng.integers(0, algebra.size, size=(max_pairs, 2))
        pairs = [(int(a), int(b)) for a, b in drawn if a != b]

    checked = disjoint = 0
    additive = True
    for i, j in pairs:
        a, b = members[i], members[j]
        union, meet = a | b, a & b
        checked += 1
        if union.density + meet.density != a.density + b.density:
            additive = False
        if meet.is_null():
            disjoint += 1
            if union.density != a.density + b.density:
                additive = False
    complements = all(
        (~members[mask]).residues == members[(algebra.size - 1) ^ mask].residues
        and (~members[mask]).modulus == members[(algebra.size - 1) ^ mask].modulus
        for mask in range(algebra.size)
    )
    return AlgebraReport(
        generators=list(algebra.generators),
        atoms=[a.describe() for a in algebra.atoms],
        atom_densities=[format_rational(d) for d in algebra.densities],
        members=algebra.size,
        pairs_checked=checked,
        disjoint_pairs=disjoint,
        additive=additive,
        complements_match=complements,
    )


# ---------------------------------------------------------------------------
# Chains and the diagonal join
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Chain:
    label: str
    member: Callable[[int], DensitySet | IndicatorSet]
    supremum: Optional[Fraction] = None


def dyadic_chain() -> Chain:
    return Chain(
        "dyadic",
        lambda j: from_upset(upset.dyadic_member(j)),
        Fraction(1),
    )


def parse_chain(spec: str, allow_indicators: bool = False) -> Chain:
    """``dyadic`` or ';'-separated set expressions, extended constantly past the last.

    With ``allow_indicators`` a part may name a set without density, which
    callers use to exercise their own premise checks.
    """
    if spec.strip() == "dyadic":
        return dyadic_chain()
    parts = [p for p in (s.strip() for s in spec.split(";")) if p]
    if not parts:
        raise ParseError("empty chain", position=0)
    sets = [INDICATORS[p] if allow_indicators and p in INDICATORS else parse_set(p) for p in parts]
    last = sets[-1]
    supremum = last.density if isinstance(last, DensitySet) else None
    return Chain(spec, lambda j: sets[min(j, len(sets)) - 1], supremum)


def default_schedule(depth: int) -> list[float]:
    return [2.0**-j for j in range(1, depth + 1)]


@dataclass(frozen=True)
class DiagonalJoin:
    predicate: Callable[[int], bool]
    exact: Optional[UPSet]
    report: DiagonalJoinReport

    def __contains__(self, n: int) -> bool:
        return self.predicate(n)


def _horizons(horizon: int) -> list[int]:
    points = [10**k for k in range(3, 7) if 10**k < horizon]
    return points + [horizon]


def diagonal_join(
    chain: Chain,
    depth: int,
    schedule: Optional[Sequence[float]] = None,
    horizon: int = 10**6,
    cutoffs: Optional[Sequence[int]] = None,
) -> DiagonalJoin:
    """w = ⋃_{j<=depth} x_{j+1} ∩ (k_j, ∞).

    k_j is the UP cutoff for ε_j unless explicit block boundaries are given.
    """
    if depth < 1:
        raise ScheduleInvalid("depth must be at least 1", depth=depth)
    eps = list(default_schedule(depth) if schedule is None else schedule)
    if len(eps) < depth or any(e <= 0 for e in eps[:depth]) or any(
        b > a for a, b in zip(eps, eps[1:depth])
    ):
        raise ScheduleInvalid("ε schedule must be positive and decreasing with one entry per level")
    eps = eps[:depth]

    members = [chain.member(j) for j in range(1, depth + 2)]
    for j in range(depth):
        if not leq_mod_null(members[j], members[j + 1]):
            raise NotIncreasing(j + 1)

    if cutoffs is None:
        cutoffs = [members[j + 1].core.cutoff(eps[j]) for j in range(depth)]
    else:
        cutoffs = [int(k) for k in cutoffs]
        if len(cutoffs) != depth or any(k < 0 for k in cutoffs):
            raise ScheduleInvalid("one nonnegative cutoff per level is required", cutoffs=cutoffs)
    tails = list(zip(members[1:], cutoffs))

    exact: Optional[UPSet] = None
    if all(s.is_periodic for s in members):
        exact = reduce(lambda acc, t: acc | _truncate(t[0].core, t[1]), tails, upset.EMPTY)

        def predicate(n: int) -> bool:
            return n in exact

        counter = exact.count
    else:

        def predicate(n: int) -> bool:
            return any(n > k and n in s for s, k in tails)

        def counter(n: int) -> int:
            return sum(1 for k in range(1, n + 1) if predicate(k))

    horizons = _horizons(horizon)
    counts = [(n, counter(n)) for n in horizons]
    target = chain.supremum if chain.supremum is not None else max(s.density for s in members)
    inclusion = [_tail_inclusion(s, exact, predicate, k) for s, k in zip(members, [cutoffs[0]] + cutoffs)]
    report = DiagonalJoinReport(
        depth=depth,
        cutoffs=cutoffs,
        epsilons=eps,
        target=format_rational(target),
        horizon_counts=counts,
        ratios=[c / n for n, c in counts],
        tail_inclusion=inclusion,
        exact=exact is not None,
    )
    logger.info("Diagonal join of %s to depth %d: ratio %.6f at N=%d", chain.label, depth, report.ratios[-1], horizon)
    return DiagonalJoin(predicate, exact, report)


def _truncate(core: UPSet, k: int) -> UPSet:
    return upset.make(
        core.modulus,
        core.residues,
        add=(n for n in core.add if n > k),
        remove=core.remove | {n for n in range(1, k + 1) if core.periodic(n)},
    )


def _tail_inclusion(s: DensitySet, exact: Optional[UPSet], predicate, k: int, window: int = 10_000) -> bool:
    if exact is not None:
        return upset.tail_included(s.core, exact, beyond=k)
    return all(predicate(n) for n in range(k + 1, k + window + 1) if n in s)


# ---------------------------------------------------------------------------
# d-system closure
# ---------------------------------------------------------------------------


def _key(s: UPSet) -> tuple[int, frozenset[int]]:
    return s.modulus, s.residues


def dsystem_check(family: Sequence[DensitySet], depth: int = 4) -> DSystemReport:
    """Closure conditions on the family taken modulo null sets.

    (i) ℕ is present; (ii) B ∖ A is present when A ⪯ B; (iii) disjoint unions
    are present; (iv) every maximal increasing chain has its join, built by
    the diagonal construction, in the family.
    """
    cores = {_key(s.core): s for s in family}
    report = DSystemReport(members=len(cores))
    if _key(upset.ALL) not in cores:
        report.violations.append("(i) ℕ is missing")
    items = list(cores.values())
    for a in items:
        for b in items:
            if leq_mod_null(a, b) and _key((b.core - a.core)) not in cores:
                report.violations.append(f"(ii) {b} \\ {a} is missing")
            if a is not b and (a.core & b.core).is_null() and _key(a.core | b.core) not in cores:
                report.violations.append(f"(iii) {a} | {b} is missing")
    for path in _maximal_chains(items):
        if len(path) < 2:
            continue
        join = diagonal_join(
            Chain(";".join(map(str, path)), lambda j, path=path: path[min(j, len(path)) - 1]),
            depth=max(depth, len(path)),
            horizon=10**3,
        )
        report.chains_checked += 1
        top = join.exact if join.exact is not None else path[-1].core
        if _key(top) not in cores or not equiv(from_upset(top), path[-1]):
            report.violations.append(f"(iv) join of {' ⪯ '.join(map(str, path))} is missing")
    report.violations = list(dict.fromkeys(report.violations))
    return report


def _maximal_chains(items: Sequence[DensitySet]) -> list[list[DensitySet]]:
    """Maximal strictly increasing chains under ⪯ modulo null."""

    def below(a: DensitySet, b: DensitySet) -> bool:
        return leq_mod_null(a, b) and not equiv(a, b)

    chains: list[list[DensitySet]] = []

    def extend(path: list[DensitySet]) -> None:
        nexts = [b for b in items if below(path[-1], b)]
        if not nexts:
            chains.append(path)
            return
        for b in nexts:
            if not any(below(path[-1], c) and below(c, b) for c in items):
                extend(path + [b])

    for start in items:
        if not any(below(c, start) for c in items):
            extend([start])
    return chains
