"""The abstract limit framework on finite truncations.

An ordered group model, a family of evaluators m_i on a finite lattice
fragment with supports s_i, the cofinite filter on {1..i_max}, and the limit
m(x) = lim_i m_i(x). The counting densities m_n(x) = |x ∩ [1, n]| / n are the
shipped instance.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, reduce
from typing import Callable, Literal, Optional, Union

from latticelp import upset
from latticelp.density import (
    Chain,
    DensitySet,
    IndicatorSet,
    diagonal_join,
    equiv,
    from_upset,
    generate_algebra,
    leq_mod_null,
    parse_chain,
    parse_set,
)
from latticelp.errors import HorizonTooSmall, InvalidInput, NotIncreasing, PremiseFailed
from latticelp.models import AxiomLine, FrameworkDescriptor, FrameworkReport, LemmaReport, LimitReport
from latticelp.rational import format_rational
from latticelp.upset import UPSet

logger = logging.getLogger(__name__)

GroupKind = Literal["additive", "multiplicative"]


# ---------------------------------------------------------------------------
# Group models
# ---------------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class PowerOfTwo:
    """The positive real 2^exponent, kept exact through its exponent."""

    exponent: Fraction

    def __mul__(self, other: PowerOfTwo) -> PowerOfTwo:
        return PowerOfTwo(self.exponent + other.exponent)

    def __str__(self) -> str:
        return f"2^({format_rational(self.exponent)})"


Element = Union[Fraction, PowerOfTwo]


@dataclass(frozen=True)
class GroupModel:
    """(ℝ, +) or (ℝ_{>0}, ·) with the usual order.

    Neighbourhoods of e: U_n = [−2^{−n}, 2^{−n}] additively and the ratio band
    [2^{−2^{−n}}, 2^{2^{−n}}] multiplicatively.
    """

    kind: GroupKind

    @property
    def neutral(self) -> Element:
        return Fraction(0) if self.kind == "additive" else PowerOfTwo(Fraction(0))

    def embed(self, value: Fraction) -> Element:
        """Image of a counting ratio: the ratio itself, or 2^ratio."""
        return Fraction(value) if self.kind == "additive" else PowerOfTwo(Fraction(value))

    def log(self, x: Element) -> Fraction:
        return x if self.kind == "additive" else x.exponent

    def op(self, x: Element, y: Element) -> Element:
        return x + y if self.kind == "additive" else x * y

    def inverse(self, x: Element) -> Element:
        return -x if self.kind == "additive" else PowerOfTwo(-x.exponent)

    def leq(self, x: Element, y: Element) -> bool:
        return self.log(x) <= self.log(y)

    def in_neighbourhood(self, x: Element, center: Element, n: int) -> bool:
        """x ∈ center·U_n."""
        return abs(self.log(self.op(self.inverse(center), x))) <= Fraction(1, 2**n)

    def format(self, x: Element) -> str:
        return format_rational(x) if self.kind == "additive" else str(x)

    def samples(self) -> list[Element]:
        values = sorted({Fraction(a, b) for a in range(-4, 5) for b in range(1, 4)})
        return [self.embed(v) for v in values]

    @property
    def metadata(self) -> dict[str, str]:
        carrier = "ℝ under +" if self.kind == "additive" else "ℝ_{>0} under ·"
        return {
            "carrier": carrier,
            "locally_compact": "yes (recorded)",
            "topology_stronger_than_order_topology": "yes (recorded, not verified)",
            "countable_character": "yes: basis U_n, n >= 1 (recorded)",
        }


def check_group_model(model: GroupModel, levels: int = 16) -> list[AxiomLine]:
    """Translation compatibility, antitone inversion and a strictly decreasing basis."""
    elements = model.samples()
    ordered = [(x, y) for x in elements for y in elements if model.leq(x, y)]

    translation = AxiomLine(name="(1) translation-compatible order", holds=True)
    for x, y in ordered:
        for z in elements:
            translation.checked += 1
            if not (model.leq(model.op(z, x), model.op(z, y)) and model.leq(model.op(x, z), model.op(y, z))):
                translation.holds = False
                translation.witness = f"x={model.format(x)} y={model.format(y)} z={model.format(z)}"
                break
        if not translation.holds:
            break

    inversion = AxiomLine(name="(2) inversion antitone", holds=True)
    for x, y in ordered:
        inversion.checked += 1
        if not model.leq(model.inverse(y), model.inverse(x)):
            inversion.holds = False
            inversion.witness = f"x={model.format(x)} y={model.format(y)}"
            break

    basis = AxiomLine(name="neighbourhood basis strictly decreasing", holds=True)
    e = model.neutral
    for n in range(1, levels):
        basis.checked += 1
        edge = model.embed(Fraction(1, 2**n))
        inner = model.embed(Fraction(1, 2 ** (n + 1)))
        if not (
            model.in_neighbourhood(edge, e, n)
            and not model.in_neighbourhood(edge, e, n + 1)
            and model.in_neighbourhood(inner, e, n)
        ):
            basis.holds = False
            basis.witness = f"n={n}"
            break
    return [translation, inversion, basis]


# ---------------------------------------------------------------------------
# Lattice fragment and instances
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PowersetFragment:
    """𝒫({1..k}) as bitmasks: bit i−1 stands for the integer i."""

    k: int

    @property
    def size(self) -> int:
        return 1 << self.k

    @property
    def top(self) -> int:
        return self.size - 1

    def ortho(self, x: int) -> int:
        return self.top ^ x

    def leq(self, x: int, y: int) -> bool:
        return x & ~y == 0

    def restrict(self, s: UPSet) -> int:
        return sum(1 << (i - 1) for i in range(1, self.k + 1) if i in s)

    def to_upset(self, x: int) -> UPSet:
        return upset.finite(i for i in range(1, self.k + 1) if x >> (i - 1) & 1)

    def show(self, x: int) -> str:
        return "{" + ",".join(str(i) for i in range(1, self.k + 1) if x >> (i - 1) & 1) + "}"


def initial_segment(n: int) -> UPSet:
    return upset.finite(range(1, n + 1))


@dataclass(frozen=True)
class FilterInstance:
    """Evaluators m_i, i = 1..i_max, over the cofinite filter tails F_n = {i >= n}."""

    name: str
    group: GroupModel
    i_max: int
    fragment: PowersetFragment
    evaluator: Callable[[int, int], Fraction]
    support: Callable[[int], UPSet]
    counting: bool = True

    def m(self, i: int, x: int) -> Element:
        return self.group.embed(self.evaluator(i, x))

    @cached_property
    def values(self) -> list[list[Element]]:
        """values[i − 1][x] = m_i(x) over the whole fragment."""
        return [[self.m(i, x) for x in range(self.fragment.size)] for i in range(1, self.i_max + 1)]

    def tail(self, n: int) -> range:
        return range(max(n, 1), self.i_max + 1)


def _counting(i: int, x: int, mask: int) -> Fraction:
    return Fraction((x & mask).bit_count(), i)


def counting_instance(group: GroupKind = "additive", i_max: int = 32, fragment_size: int = 8) -> FilterInstance:
    """m_n(x) = |x ∩ [1, n]| / n with support s_n = {1..n}."""
    fragment = PowersetFragment(fragment_size)
    return FilterInstance(
        "counting",
        GroupModel(group),
        i_max,
        fragment,
        lambda i, x: _counting(i, x, fragment.restrict(initial_segment(i))),
        initial_segment,
    )


def broken_evaluator(group: GroupKind = "additive", i_max: int = 32, fragment_size: int = 8) -> FilterInstance:
    """m_n(x) = 1/n if x meets [1, n], else 0: subadditive but not additive."""
    fragment = PowersetFragment(fragment_size)

    def evaluator(i: int, x: int) -> Fraction:
        return Fraction(1, i) if x & fragment.restrict(initial_segment(i)) else Fraction(0)

    return FilterInstance("broken_evaluator", GroupModel(group), i_max, fragment, evaluator, initial_segment)


def broken_support(group: GroupKind = "additive", i_max: int = 32, fragment_size: int = 8) -> FilterInstance:
    """Counting evaluators paired with the too-small supports s_n = {1..n−1}."""
    base = counting_instance(group, i_max, fragment_size)
    return FilterInstance(
        "broken_support",
        base.group,
        i_max,
        base.fragment,
        base.evaluator,
        lambda i: initial_segment(i - 1),
    )


def build_instance(descriptor: FrameworkDescriptor) -> FilterInstance:
    if descriptor.instance != "counting" or descriptor.filter != "cofinite":
        raise InvalidInput("only the counting instance over the cofinite filter is available")
    return counting_instance(descriptor.group, descriptor.i_max, descriptor.fragment_size)


# ---------------------------------------------------------------------------
# Axiom checks
# ---------------------------------------------------------------------------


def check_mi_axioms(inst: FilterInstance) -> list[AxiomLine]:
    """(i) m_i(0) = e, (ii) order-preserving, (iii) m_i(x∨y) <= m_i(x)m_i(y),
    (iv) x <= y ⇒ m_i(y) = m_i(x)m_i(y∧x⊥), exhaustively for i <= i_max."""
    g, frag = inst.group, inst.fragment
    lines = [
        AxiomLine(name="(i) m_i(0) = e", holds=True),
        AxiomLine(name="(ii) m_i order-preserving", holds=True),
        AxiomLine(name="(iii) m_i(x∨y) <= m_i(x)·m_i(y)", holds=True),
        AxiomLine(name="(iv) m_i(y) = m_i(x)·m_i(y∧x⊥) for x <= y", holds=True),
    ]

    def fail(line: AxiomLine, witness: str) -> None:
        if line.holds:
            line.holds = False
            line.witness = witness

    for i, row in enumerate(inst.values, start=1):
        lines[0].checked += 1
        if row[0] != g.neutral:
            fail(lines[0], f"i={i}")
        for x in range(frag.size):
            for y in range(frag.size):
                subset = frag.leq(x, y)
                if subset:
                    lines[1].checked += 1
                    if not g.leq(row[x], row[y]):
                        fail(lines[1], f"i={i} x={frag.show(x)} y={frag.show(y)}")
                    lines[3].checked += 1
                    if row[y] != g.op(row[x], row[y & frag.ortho(x)]):
                        fail(lines[3], f"i={i} x={frag.show(x)} y={frag.show(y)}")
                if x <= y:
                    lines[2].checked += 1
                    if not g.leq(row[x | y], g.op(row[x], row[y])):
                        fail(lines[2], f"i={i} x={frag.show(x)} y={frag.show(y)}")
    return lines


def check_supports(inst: FilterInstance) -> list[AxiomLine]:
    frag = inst.fragment
    identity = AxiomLine(name="support identity m_i(x) = m_i(x∧s_i)", holds=True)
    for i, row in enumerate(inst.values, start=1):
        s = frag.restrict(inst.support(i))
        for x in range(frag.size):
            identity.checked += 1
            if row[x] != row[x & s]:
                identity.holds = False
                identity.witness = f"i={i} x={frag.show(x)}"
                break
        if not identity.holds:
            break

    null_join = AxiomLine(name="join of s_i over I∖F_n is null", holds=True)
    for n in range(1, inst.i_max + 2):
        joined = reduce(lambda acc, i: acc | inst.support(i), range(1, n), upset.EMPTY)
        null_join.checked += 1
        if not joined.is_null():
            null_join.holds = False
            null_join.witness = f"n={n} join={joined.describe()}"
            break

    base = AxiomLine(name="filter base decreasing, countably incomplete", holds=True)
    for n in range(1, inst.i_max + 1):
        base.checked += 1
        if not set(inst.tail(n + 1)) <= set(inst.tail(n)):
            base.holds = False
            base.witness = f"n={n}"
    if list(inst.tail(inst.i_max + 1)):
        base.holds = False
        base.witness = "tails do not exhaust the truncation"
    return [identity, null_join, base]


def check_counting_bullets(generators: tuple[str, ...] = ("AP(2,0)", "AP(3,0)")) -> list[AxiomLine]:
    """Λ meet-stability and separation, on the members of a generated algebra."""
    algebra = generate_algebra([parse_set(g) for g in generators])
    members = [from_upset(algebra.member(mask)) for mask in range(algebra.size)]
    meet = AxiomLine(name="x ⪯ y in Λ ⇒ x∧y ∈ Λ and [x∧y] = [x]", holds=True)
    separation = AxiomLine(name="x ⪯ y, m(x) = m(y) ⇒ [x] = [y]", holds=True)
    for x in members:
        for y in members:
            if not leq_mod_null(x, y):
                continue
            meet.checked += 1
            if not equiv(x & y, x):
                meet.holds = False
                meet.witness = f"x={x} y={y}"
            if x.density == y.density:
                separation.checked += 1
                if not equiv(x, y):
                    separation.holds = False
                    separation.witness = f"x={x} y={y}"
    return [meet, separation]


def check_framework(inst: FilterInstance) -> FrameworkReport:
    lines = check_group_model(inst.group) + check_mi_axioms(inst) + check_supports(inst)
    if inst.counting:
        lines += check_counting_bullets()
    report = FrameworkReport(
        group=inst.group.kind,
        i_max=inst.i_max,
        lines=lines,
        metadata={"instance": inst.name, "fragment": f"P({{1..{inst.fragment.k}}})", **inst.group.metadata},
    )
    logger.info("Framework %s: %d lines, %d violations", inst.name, len(lines), len(report.violations))
    return report


# ---------------------------------------------------------------------------
# Limits along the filter
# ---------------------------------------------------------------------------


def filter_limit(
    inst: FilterInstance,
    x: DensitySet | UPSet | IndicatorSet | int,
    tolerance: float = 1e-2,
    horizon: int = 2**20,
) -> LimitReport:
    """lim_{i,ℱ} m_i(x): exact on density sets, dyadic-checkpoint oscillation otherwise."""
    g = inst.group
    if isinstance(x, int):
        x = inst.fragment.to_upset(x)
    if isinstance(x, UPSet):
        x = from_upset(x)
    if isinstance(x, DensitySet):
        return LimitReport(
            value=g.format(g.embed(x.density)),
            exact=True,
            bound=x.error_bound(horizon),
            method="exact",
        )

    levels = horizon.bit_length() - 1
    if levels < 8:
        raise HorizonTooSmall(f"horizon {horizon} gives fewer than 8 dyadic checkpoints", horizon=horizon)
    checkpoints = [2**k for k in range(1, levels + 1)]
    ratios: list[tuple[int, float]] = []
    total, n = 0, 0
    for point in checkpoints:
        while n < point:
            n += 1
            total += n in x
        ratios.append((point, float(g.log(g.embed(Fraction(total, point))))))
    half = len(ratios) // 2
    early, late = ratios[:half], ratios[half:]

    def oscillation(window: list[tuple[int, float]]) -> float:
        values = [r for _, r in window]
        return max(values) - min(values)

    if oscillation(early) >= tolerance and oscillation(late) >= tolerance:
        low = min(late, key=lambda t: t[1])
        high = max(late, key=lambda t: t[1])
        logger.info("Divergent limit for %s: %.4f vs %.4f", x, low[1], high[1])
        return LimitReport(divergent=True, witness=[low, high], bound=oscillation(late), method="dyadic")
    if oscillation(late) < tolerance:
        value = ratios[-1][1]
        return LimitReport(value=f"{value:.12g}", bound=oscillation(late), witness=late, method="dyadic")
    raise HorizonTooSmall(
        f"oscillation undecided at horizon {horizon}", horizon=horizon, oscillation=oscillation(late)
    )


# ---------------------------------------------------------------------------
# Countable additivity premises
# ---------------------------------------------------------------------------


def _gamma_cutoff(s: DensitySet, n: int, limit: int = 2**40) -> Optional[int]:
    """Smallest dyadic index beyond which m_i(s) stays in m(s)·U_n."""
    eps = 2.0**-n
    if s.is_periodic:
        return max(n, s.core.cutoff(eps))
    i = max(n, 2)
    while i <= limit:
        if s.error_bound(i) <= eps:
            return i
        i *= 2
    return None


def lemma_premises_check(
    inst: FilterInstance,
    chain: Chain | str,
    depth: int = 8,
    horizon: int = 10**6,
) -> LemmaReport:
    """Select Γ_n = {i : m_i(x_n) ∈ m(x_n)U_n} ∩ F_n, check each is in the filter,
    and compare the diagonal join against sup_n m(x_n)."""
    if isinstance(chain, str):
        chain = parse_chain(chain, allow_indicators=True)
    members = [chain.member(j) for j in range(1, depth + 2)]
    for j, s in enumerate(members, start=1):
        if not isinstance(s, DensitySet):
            witness = filter_limit(inst, s)
            raise PremiseFailed(
                "Λ membership",
                f"x_{j} = {s} has no limit along the filter",
                witness=[list(w) for w in witness.witness],
            )

    # block n of the join draws on x_{n+1} past Γ_n
    cutoffs = []
    for n, s in enumerate(members[1:], start=1):
        cutoff = _gamma_cutoff(s, n)
        if cutoff is None:
            raise PremiseFailed("Γ_n ∈ ℱ", f"no cofinite selection for x_{n + 1} = {s}")
        cutoffs.append(cutoff)

    schedule = [2.0**-j for j in range(1, depth + 1)]
    try:
        join = diagonal_join(chain, depth, schedule, horizon, cutoffs=cutoffs)
    except NotIncreasing as exc:
        raise PremiseFailed("increasing modulo 𝒩", str(exc), index=exc.details.get("index")) from exc

    report = join.report
    target = chain.supremum if chain.supremum is not None else max(s.density for s in members)
    reached = members[-1].density
    if join.exact is not None:
        attained = join.exact.density == reached and abs(target - reached) <= Fraction(1, 2**depth)
    else:
        slack = schedule[-1] + members[-1].error_bound(horizon)
        attained = abs(report.ratios[-1] - float(target)) <= slack
    g = inst.group
    logger.info("Lemma premises on %s: target %s, attained=%s", chain.label, g.format(g.embed(target)), attained)
    return LemmaReport(
        group=g.kind,
        depth=depth,
        gamma_cutoffs=cutoffs,
        target=format_rational(target),
        join=report,
        attained=attained,
    )
