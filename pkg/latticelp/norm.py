"""The L^p(L, φ) semi-norm, its kernel and the derived submeasure φ*.

    ‖x‖ = inf { (Σ_B c_B^p φ(B))^{1/p} : ±x ⊑ Σ_B c_B ⊗ B,  c_B >= 0 }

Under ``disjoint`` semantics the B range over a family with pairwise meet 0;
the infimum is the minimum over maximal such families. Under ``any``
semantics (p = 1 only) every nonzero element may be used once.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache
from typing import Literal, Optional, Sequence, Union

import numpy as np

from latticelp import cone, linalg
from latticelp.barrier import minimize_power_sum
from latticelp.config import settings
from latticelp.errors import (
    DimensionMismatch,
    FamilyExplosion,
    InvalidExponent,
    SemanticsUnsupported,
)
from latticelp.lattice import Lattice
from latticelp.linalg import Vector
from latticelp.metrics import FAMILY_ENUMERATIONS, NORM_DURATION, NORM_EVALUATIONS
from latticelp.models import (
    NormResultModel,
    PhiStarInvarianceReport,
    SampleViolation,
    SemanticsProbeReport,
    TriangleReport,
    WitnessTerm,
)
from latticelp.quotient import QuotientSpace, XVector, cone_contains
from latticelp.rational import format_rational, format_vector, parse_rational
from latticelp.simplex import solve_lp
from latticelp.submeasure import Submeasure, from_values

logger = logging.getLogger(__name__)

Semantics = Literal["disjoint", "any"]


# ---------------------------------------------------------------------------
# Context and results
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class NormContext:
    space: QuotientSpace
    phi: Submeasure
    p: Fraction
    semantics: Semantics = "disjoint"

    @property
    def lattice(self) -> Lattice:
        return self.space.lattice

    @property
    def exact(self) -> bool:
        return self.p == 1

    def with_p(self, p: Fraction | int | str, semantics: Optional[Semantics] = None) -> NormContext:
        return make_context(self.space, self.phi, p, semantics or self.semantics)

    def with_phi(self, phi: Submeasure) -> NormContext:
        return replace(self, phi=phi)


def make_context(
    space: QuotientSpace,
    phi: Submeasure,
    p: Fraction | int | str = 1,
    semantics: Semantics = "disjoint",
) -> NormContext:
    exponent = parse_rational(p)
    if not 1 <= exponent <= 16:
        raise InvalidExponent(f"p must be a rational in [1, 16], got {format_rational(exponent)}", p=format_rational(exponent))
    if semantics not in ("disjoint", "any"):
        raise SemanticsUnsupported(f"unknown semantics {semantics!r}", semantics=semantics)
    if exponent > 1 and semantics == "any":
        raise SemanticsUnsupported("p > 1 requires disjoint dominating families", p=format_rational(exponent))
    if phi.lattice is not space.lattice:
        raise DimensionMismatch("submeasure and quotient space are built on different lattices")
    return NormContext(space, phi, exponent, semantics)


@dataclass(frozen=True)
class NormResult:
    """Exact value at p = 1; otherwise a float with a certified bracket."""

    value: Union[Fraction, float]
    witness: tuple[tuple[Fraction, str], ...]
    semantics: Semantics
    lower: Optional[float] = None
    upper: Optional[float] = None

    @property
    def exact(self) -> bool:
        return isinstance(self.value, Fraction)

    def __float__(self) -> float:
        return float(self.value)

    def to_model(self) -> NormResultModel:
        return NormResultModel(
            value=format_rational(self.value) if self.exact else float(self.value),
            bracket=None if self.exact else [float(self.lower), float(self.upper)],
            witness=[WitnessTerm(b=format_rational(b), B=e) for b, e in self.witness],
            semantics=self.semantics,
        )


# ---------------------------------------------------------------------------
# Dominating families
# ---------------------------------------------------------------------------


def meet_zero_families(lattice: Lattice, cap: Optional[int] = None) -> tuple[tuple[int, ...], ...]:
    """Maximal families of distinct nonzero elements with pairwise meet 0."""
    families = _families(lattice.meet_table, lattice.bottom, settings.family_cap if cap is None else cap)
    logger.debug("Lattice %s has %d maximal meet-zero families", lattice.name, len(families))
    return families


# cache key is the meet table, not the Lattice object
@lru_cache(maxsize=64)
def _families(meet_table: tuple[tuple[int, ...], ...], bottom: int, cap: int) -> tuple[tuple[int, ...], ...]:
    FAMILY_ENUMERATIONS.inc()
    vertices = [v for v in range(len(meet_table)) if v != bottom]
    adjacency = {
        v: sum(1 << u for u in vertices if u != v and meet_table[u][v] == bottom)
        for v in vertices
    }
    found: list[int] = []

    def expand(chosen: int, candidates: int, excluded: int) -> None:
        if not candidates and not excluded:
            found.append(chosen)
            if len(found) > cap:
                raise FamilyExplosion(
                    f"more than {cap} maximal meet-zero families", cap=cap
                )
            return
        pool = candidates | excluded
        pivot = max(_bits(pool), key=lambda u: bin(candidates & adjacency[u]).count("1"))
        for v in _bits(candidates & ~adjacency[pivot]):
            expand(chosen | 1 << v, candidates & adjacency[v], excluded & adjacency[v])
            candidates &= ~(1 << v)
            excluded |= 1 << v

    expand(0, sum(1 << v for v in vertices), 0)
    return tuple(sorted(tuple(_bits(mask)) for mask in found))


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------


def norm(ctx: NormContext, x: XVector) -> NormResult:
    """Evaluate ‖x‖ under the context's exponent and dominance semantics."""
    if len(x.coords) != ctx.space.x_dim:
        raise DimensionMismatch(
            f"vector of dimension {len(x.coords)} in a space of dimension {ctx.space.x_dim}",
            got=len(x.coords),
            expected=ctx.space.x_dim,
        )
    exponent = "one" if ctx.exact else "power"
    NORM_EVALUATIONS.labels(exponent=exponent, semantics=ctx.semantics).inc()
    with NORM_DURATION.labels(exponent=exponent).time():
        if x.is_zero():
            if ctx.exact:
                return NormResult(Fraction(0), (), ctx.semantics)
            return NormResult(0.0, (), ctx.semantics, 0.0, 0.0)
        if ctx.exact:
            families = (
                (tuple(ctx.lattice.nonzero()),)
                if ctx.semantics == "any"
                else meet_zero_families(ctx.lattice)
            )
            result = _minimize(ctx, families, x)
        else:
            result = _minimize_power(ctx, meet_zero_families(ctx.lattice), x)
    logger.debug("‖%s‖ = %s (p=%s, %s)", x, result.value, format_rational(ctx.p), ctx.semantics)
    return result


def family_norm(ctx: NormContext, family: Sequence[int], x: XVector) -> Optional[NormResult]:
    """Optimum restricted to one family of elements; None when it cannot dominate ±x."""
    if ctx.exact:
        solved = _family_lp(ctx, tuple(family), x.coords)
        if solved is None:
            return None
        value, witness = solved
        return NormResult(value, witness, ctx.semantics)
    try:
        return _minimize_power(ctx, (tuple(family),), x)
    except ValueError:
        return None


def _minimize(ctx: NormContext, families, x: XVector) -> NormResult:
    best: Optional[tuple[Fraction, tuple[tuple[Fraction, str], ...]]] = None
    for family in families:
        solved = _family_lp(ctx, family, x.coords)
        if solved is not None and (best is None or solved[0] < best[0]):
            best = solved
    assert best is not None, "the family {1} always dominates"
    value, witness = best
    _check_witness(ctx, witness, x)
    return NormResult(value, witness, ctx.semantics)


def _family_lp(ctx: NormContext, family: tuple[int, ...], coords: Vector):
    """Exact LP over (c, λ, μ) >= 0 with Σ c_B q_B ∓ x = G λ, G μ."""
    space = ctx.space
    k, f, g = space.x_dim, len(family), len(space.cone_generators)
    q_cols = [space.q(b) for b in family]
    gens = space.cone_generators
    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    zero = Fraction(0)
    for sign in (1, -1):
        for d in range(k):
            row = [q[d] for q in q_cols]
            row += [-gen[d] if sign == 1 else zero for gen in gens]
            row += [-gen[d] if sign == -1 else zero for gen in gens]
            rows.append(row)
            rhs.append(sign * coords[d])
    cost = [ctx.phi.values[b] for b in family] + [zero] * (2 * g)
    result = solve_lp(rows, rhs, cost)
    if result.status != "optimal":
        return None
    witness = tuple(
        (result.x[i], ctx.lattice.label(b)) for i, b in enumerate(family) if result.x[i] > 0
    )
    return result.value, witness


def _check_witness(ctx: NormContext, witness, x: XVector) -> None:
    dominating = ctx.space.vector(witness)
    if not (cone_contains(ctx.space, dominating - x) and cone_contains(ctx.space, dominating + x)):
        raise RuntimeError(f"witness {dominating} does not dominate ±({x})")


def _minimize_power(ctx: NormContext, families, x: XVector) -> NormResult:
    space = ctx.space
    p = float(ctx.p)
    facets = space.facets
    hx = [linalg.dot(h, x.coords) for h in facets]
    rhs = np.array([float(abs(v)) for v in hx])
    best = None
    lowest = None
    for family in families:
        columns = [space.q(b) for b in family]
        matrix = np.array(
            [[float(linalg.dot(h, col)) for col in columns] for h in facets]
        ).reshape(len(facets), len(family))
        weights = np.array([float(ctx.phi.values[b]) for b in family])
        solved = minimize_power_sum(weights, matrix, rhs, p)
        if solved is None:
            continue
        lowest = solved.lower if lowest is None else min(lowest, solved.lower)
        if best is None or solved.upper < best[0].upper:
            best = (solved, family)
    if best is None:
        raise ValueError("no family dominates the vector")
    solved, family = best
    witness = _rational_witness(ctx, family, solved.c, x)
    upper = solved.upper ** (1.0 / p)
    lower = max(lowest, 0.0) ** (1.0 / p)
    return NormResult(upper, witness, ctx.semantics, lower, upper)


def _rational_witness(ctx: NormContext, family, c: np.ndarray, x: XVector):
    for slack in (0.0, 1e-12, 1e-9, 1e-6, 1e-3):
        witness = tuple(
            (Fraction(float(value) * (1 + slack)).limit_denominator(10**12), ctx.lattice.label(b))
            for value, b in zip(c, family)
            if value > 0
        )
        try:
            _check_witness(ctx, witness, x)
            return witness
        except RuntimeError:
            continue
    raise RuntimeError(f"could not certify a rational witness for {x}")


def norm_of_coords(ctx: NormContext, coords: Sequence[Fraction]) -> NormResult:
    return norm(ctx, ctx.space.from_coords(coords))


# ---------------------------------------------------------------------------
# Kernel and φ*
# ---------------------------------------------------------------------------


def kernel_basis(ctx: NormContext) -> list[XVector]:
    """Basis of {x : ‖x‖ = 0}.

    x is in the kernel iff ±x ⊑ y for some y in the cone of φ-null generators,
    which makes the kernel the lineality space of cone(null q_B) − C.
    """
    space = ctx.space
    null = [space.q(b) for b in ctx.phi.null_elements()]
    generators = [g for g in null if not linalg.is_zero(g)]
    generators += [linalg.scale(Fraction(-1), g) for g in space.cone_generators]
    basis = cone.lineality_basis(generators, space.x_dim)
    logger.info("Kernel of dimension %d (%d null elements)", len(basis), len(null))
    return [space.from_coords(v) for v in basis]


def derive_phistar(ctx: NormContext) -> Submeasure:
    """φ*(A) = ‖1⊗A‖ in L¹(L, φ)."""
    if not ctx.exact:
        raise InvalidExponent("φ* is defined through the p = 1 norm", p=format_rational(ctx.p))
    values = {i: norm(ctx, ctx.space.unit(i)).value for i in range(ctx.lattice.size)}
    phistar = from_values(ctx.lattice, values)
    logger.info("Derived φ* = %s", phistar.as_dict())
    return phistar


def semantics_probe(ctx: NormContext, samples: Sequence[XVector], seed: int = 0) -> SemanticsProbeReport:
    """Compare p = 1 norms under ``any`` and ``disjoint`` dominance."""
    any_ctx = ctx.with_p(1, "any")
    disjoint_ctx = ctx.with_p(1, "disjoint")
    discrepancies = []
    for x in samples:
        a, d = norm(any_ctx, x).value, norm(disjoint_ctx, x).value
        if a != d:
            discrepancies.append(
                SampleViolation(
                    vector=format_vector(x.coords),
                    detail=f"any={format_rational(a)} disjoint={format_rational(d)}",
                )
            )
    if discrepancies:
        logger.warning("Semantics disagree on %d of %d samples", len(discrepancies), len(samples))
    return SemanticsProbeReport(
        seed=seed, samples=len(samples), agree=not discrepancies, discrepancies=discrepancies
    )


def _same(a: NormResult, b: NormResult, rel: float = 1e-6) -> bool:
    if a.exact and b.exact:
        return a.value == b.value
    x, y = float(a), float(b)
    return abs(x - y) <= rel * max(abs(x), abs(y)) + 1e-9


def _describe(result: NormResult) -> str:
    return format_rational(result.value) if result.exact else f"{float(result):.9g}"


def phistar_invariance(
    ctx: NormContext,
    samples: Sequence[XVector],
    seed: int = 0,
    phistar: Optional[Submeasure] = None,
) -> PhiStarInvarianceReport:
    """‖x‖ under φ and under φ* agree on every sample (exact at p = 1, 1e-6 relative otherwise).

    φ* is derived at p = 1 under the context's semantics unless supplied.
    """
    if phistar is None:
        phistar = derive_phistar(ctx.with_p(1))
    starred = ctx.with_phi(phistar)
    discrepancies = []
    for x in samples:
        a, b = norm(ctx, x), norm(starred, x)
        if not _same(a, b):
            discrepancies.append(
                SampleViolation(vector=format_vector(x.coords), detail=f"φ={_describe(a)} φ*={_describe(b)}")
            )
    top = phistar.values[ctx.lattice.top]
    if discrepancies or top != 1:
        logger.warning(
            "φ* changes the norm on %d of %d samples (p=%s, %s); φ*(1) = %s",
            len(discrepancies),
            len(samples),
            format_rational(ctx.p),
            ctx.semantics,
            format_rational(top),
        )
    return PhiStarInvarianceReport(
        seed=seed,
        p=format_rational(ctx.p),
        semantics=ctx.semantics,
        samples=len(samples),
        phistar_top=format_rational(top),
        top_is_one=top == 1,
        agree=not discrepancies,
        discrepancies=discrepancies,
    )


def triangle_check(ctx: NormContext, samples: Sequence[XVector], seed: int = 0) -> TriangleReport:
    """‖x + y‖ <= ‖x‖ + ‖y‖ on every pair of element units and on consecutive samples."""
    space = ctx.space
    units = [space.unit(i) for i in ctx.lattice.nonzero()]
    pairs = [(u, v) for k, u in enumerate(units) for v in units[k + 1:]]
    pairs += list(zip(samples, samples[1:]))
    violations = []
    for x, y in pairs:
        total, left, right = norm(ctx, x + y), norm(ctx, x), norm(ctx, y)
        if total.exact:
            broken = total.value > left.value + right.value
        else:
            broken = total.lower > (left.upper + right.upper) * (1 + 1e-6) + 1e-9
        if broken:
            violations.append(
                SampleViolation(
                    vector=format_vector(x.coords) + format_vector(y.coords),
                    detail=f"‖x+y‖={_describe(total)} > ‖x‖+‖y‖={_describe(left)}+{_describe(right)}",
                )
            )
    if violations:
        logger.warning("Triangle inequality fails on %d of %d pairs (%s)", len(violations), len(pairs), ctx.semantics)
    return TriangleReport(
        seed=seed, p=format_rational(ctx.p), semantics=ctx.semantics, pairs=len(pairs), violations=violations
    )
