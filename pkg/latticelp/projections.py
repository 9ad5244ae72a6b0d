"""Projections P_M, Q_M and the checks built on them."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from latticelp import linalg
from latticelp.config import settings
from latticelp.errors import NoSplitBasis, NotOrthomodular
from latticelp.lattice import is_orthomodular
from latticelp.linalg import Vector
from latticelp.models import (
    ContractivityReport,
    OrderCharacterizationReport,
    OrderedSpaceReport,
    PythagorasReport,
    SampleViolation,
)
from latticelp.norm import NormContext, NormResult, norm
from latticelp.quotient import XVector, leq
from latticelp.rational import format_rational, format_vector
from latticelp.sampling import make_rng, sample_vectors

logger = logging.getLogger(__name__)

_RELATIVE = 1e-6


@dataclass(frozen=True)
class ProjectionPair:
    m: str
    basis: tuple[str, ...]
    p_matrix: tuple[Vector, ...]
    q_matrix: tuple[Vector, ...]

    def project(self, x: XVector, space) -> tuple[XVector, XVector]:
        return (
            space.from_coords(linalg.mat_vec(self.p_matrix, x.coords)),
            space.from_coords(linalg.mat_vec(self.q_matrix, x.coords)),
        )


def build_projections(ctx: NormContext, m: str) -> ProjectionPair:
    """Split basis {q(e_N) : N <= M or N <= M⊥}, then P: q(e_N) ↦ q(e_{M∧N}), Q: q(e_N) ↦ q(e_{M⊥∧N})."""
    lattice, space = ctx.lattice, ctx.space
    if not is_orthomodular(lattice):
        raise NotOrthomodular(f"lattice {lattice.name or '<anonymous>'} is not orthomodular")
    mi = lattice.index(m)
    mo = lattice.ortho(mi)
    k = space.x_dim

    chosen: list[int] = []
    span = linalg.RowSpace(k)
    for n in range(lattice.size):
        if len(chosen) == k:
            break
        if (lattice.leq(n, mi) or lattice.leq(n, mo)) and span.add(space.q(n)):
            chosen.append(n)
    if len(chosen) < k:
        logger.warning("No split basis for M=%s in %s", m, lattice.name)
        raise NoSplitBasis(
            f"elements below {m} or its complement span only {len(chosen)} of {k} dimensions",
            m=m,
            rank=len(chosen),
            dim=k,
        )

    if k == 0:
        empty: tuple[Vector, ...] = ()
        return ProjectionPair(m, (), empty, empty)
    columns = linalg.transpose([space.q(n) for n in chosen])
    inverse = linalg.inverse(columns)
    p_img = linalg.transpose([space.q(lattice.meet(mi, n)) for n in chosen])
    q_img = linalg.transpose([space.q(lattice.meet(mo, n)) for n in chosen])
    p_matrix = linalg.mat_mul(p_img, inverse)
    q_matrix = linalg.mat_mul(q_img, inverse)

    identity = linalg.identity(k)
    zero = tuple(linalg.zero(k) for _ in range(k))
    total = tuple(linalg.add(a, b) for a, b in zip(p_matrix, q_matrix))
    checks = {
        "P+Q=Id": total == identity,
        "PQ=0": linalg.mat_mul(p_matrix, q_matrix) == zero,
        "QP=0": linalg.mat_mul(q_matrix, p_matrix) == zero,
        "P²=P": linalg.mat_mul(p_matrix, p_matrix) == p_matrix,
        "Q²=Q": linalg.mat_mul(q_matrix, q_matrix) == q_matrix,
    }
    failed = [name for name, ok in checks.items() if not ok]
    if failed:
        raise RuntimeError(f"projection identities failed for M={m}: {failed}")
    logger.info("Projections for M=%s on basis %s", m, [lattice.label(n) for n in chosen])
    return ProjectionPair(m, tuple(lattice.label(n) for n in chosen), p_matrix, q_matrix)


# ---------------------------------------------------------------------------
# Checks
# ---------------------------------------------------------------------------


def splitting_failures(ctx: NormContext, m: str) -> list[str]:
    """Elements A with φ(A∧M) + φ(A∧M⊥) != φ(A)."""
    lattice, phi = ctx.lattice, ctx.phi
    mi = lattice.index(m)
    mo = lattice.ortho(mi)
    return [
        lattice.label(a)
        for a in range(lattice.size)
        if phi.values[lattice.meet(a, mi)] + phi.values[lattice.meet(a, mo)] != phi.values[a]
    ]


def check_pythagoras(
    ctx: NormContext, m: str, seed: int = 0, sample_size: Optional[int] = None
) -> PythagorasReport:
    """‖x‖^p = ‖P_M x‖^p + ‖Q_M x‖^p on the deterministic sample."""
    failures = splitting_failures(ctx, m)
    report = PythagorasReport(
        m=m,
        p=format_rational(ctx.p),
        seed=seed,
        hypothesis_holds=not failures,
        hypothesis_failures=failures,
    )
    if failures:
        logger.warning("Splitting hypothesis fails for M=%s on %s", m, failures)
        return report
    pair = build_projections(ctx, m)
    samples = sample_vectors(ctx.space, seed, sample_size)
    for x in samples:
        px, qx = pair.project(x, ctx.space)
        whole, left, right = norm(ctx, x), norm(ctx, px), norm(ctx, qx)
        if ctx.exact:
            holds = whole.value == left.value + right.value
        else:
            p = float(ctx.p)
            lhs = float(whole) ** p
            rhs = float(left) ** p + float(right) ** p
            holds = abs(lhs - rhs) <= _RELATIVE * max(lhs, rhs, 1e-300)
        if not holds:
            report.violations.append(
                SampleViolation(
                    vector=format_vector(x.coords),
                    detail=f"‖x‖={_show(whole)} ‖Px‖={_show(left)} ‖Qx‖={_show(right)}",
                )
            )
    report.samples = len(samples)
    return report


def check_contractivity(
    ctx: NormContext, m: str, seed: int = 0, sample_size: Optional[int] = None
) -> ContractivityReport:
    pair = build_projections(ctx, m)
    samples = sample_vectors(ctx.space, seed, sample_size)
    violations = []
    for x in samples:
        whole = norm(ctx, x)
        for name, image in zip(("P", "Q"), pair.project(x, ctx.space)):
            part = norm(ctx, image)
            if not _at_most(part, whole):
                violations.append(
                    SampleViolation(
                        vector=format_vector(x.coords),
                        detail=f"‖{name}x‖={_show(part)} > ‖x‖={_show(whole)}",
                    )
                )
    return ContractivityReport(
        m=m, p=format_rational(ctx.p), seed=seed, samples=len(samples), violations=violations
    )


def check_order_characterization(
    ctx: NormContext, m: str, seed: int = 0, sample_size: Optional[int] = None
) -> OrderCharacterizationReport:
    """x ⊑ y iff P_M x ⊑ P_M y and Q_M x ⊑ Q_M y.

    Each sample x is paired with x + c for a random cone point c, in both
    orders, and with the next sample.
    """
    space = ctx.space
    pair = build_projections(ctx, m)
    samples = sample_vectors(space, seed, sample_size)
    rng = make_rng(seed)
    gens = space.cone_generators
    pairs = []
    for x, following in zip(samples, samples[1:] + samples[:1]):
        above = x + _cone_point(space, gens, rng) if gens else x
        pairs += [(x, above), (above, x), (x, following)]
    violations = []
    ordered = 0
    for x, y in pairs:
        px, qx = pair.project(x, space)
        py, qy = pair.project(y, space)
        direct = leq(space, x, y)
        ordered += direct
        split = leq(space, px, py) and leq(space, qx, qy)
        if direct != split:
            violations.append(
                SampleViolation(
                    vector=format_vector(x.coords) + format_vector(y.coords),
                    detail=f"x⊑y is {direct} but componentwise is {split}",
                )
            )
    return OrderCharacterizationReport(
        m=m, seed=seed, pairs=len(pairs), ordered_pairs=ordered, violations=violations
    )


def ordered_space_check(
    ctx: NormContext, seed: int = 0, sample_size: Optional[int] = None
) -> OrderedSpaceReport:
    """Monotonicity 0 ⊑ x ⊑ y ⇒ ‖x‖ <= ‖y‖ on sampled pairs, and ‖z‖ = 0 on the lineality of C."""
    space = ctx.space
    count = settings.sample_size if sample_size is None else sample_size
    rng = make_rng(seed)
    gens = space.cone_generators
    violations = []
    for _ in range(count if gens else 0):
        x = _cone_point(space, gens, rng)
        y = x + _cone_point(space, gens, rng)
        small, large = norm(ctx, x), norm(ctx, y)
        if not _at_most(small, large):
            violations.append(
                SampleViolation(
                    vector=format_vector(x.coords) + format_vector(y.coords),
                    detail=f"‖x‖={_show(small)} > ‖y‖={_show(large)}",
                )
            )
    saliency = []
    for z in space.lineality:
        value = norm(ctx, space.from_coords(z))
        if float(value) > (0 if ctx.exact else 1e-9):
            saliency.append(
                SampleViolation(vector=format_vector(z), detail=f"‖z‖={_show(value)} on ±z ∈ C")
            )
    return OrderedSpaceReport(
        seed=seed,
        monotone_pairs=count if gens else 0,
        monotonicity_violations=violations,
        lineality_dim=len(space.lineality),
        ambient_lineality_dim=len(space.delta_basis) + len(space.lineality),
        saliency_violations=saliency,
    )


def _cone_point(space, gens: Sequence[Vector], rng) -> XVector:
    weights = rng.integers(0, 4, size=len(gens))
    coords = linalg.zero(space.x_dim)
    for w, g in zip(weights, gens):
        if w:
            coords = linalg.add(coords, linalg.scale(Fraction(int(w)), g))
    return space.from_coords(coords)


def _at_most(a: NormResult, b: NormResult) -> bool:
    if a.exact and b.exact:
        return a.value <= b.value
    return float(a) <= float(b) * (1 + _RELATIVE) + 1e-12


def _show(result: NormResult) -> str:
    return format_rational(result.value) if result.exact else f"{float(result):.12g}"
