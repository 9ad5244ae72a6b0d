"""Embeddings of measure algebras and the search for algebrifications."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Optional, Sequence

from latticelp import linalg
from latticelp.config import settings
from latticelp.errors import HypothesisUnmet, InvalidInput, SearchSpaceExceeded
from latticelp.lattice import Lattice, from_file, is_boolean, join_primes
from latticelp.linalg import Vector
from latticelp.models import (
    AlgebrificationModel,
    EmbeddingFile,
    EmbeddingReport,
    SampleViolation,
    UniquenessReport,
)
from latticelp.norm import NormContext, derive_phistar, kernel_basis, make_context, norm
from latticelp.quotient import build
from latticelp.rational import format_rational, format_vector, parse_rational
from latticelp.sampling import make_rng, random_rationals, sample_vectors, sign_patterns
from latticelp.submeasure import check_submeasure

logger = logging.getLogger(__name__)

_RELATIVE = 1e-6


def classical_norm(coefficients: Sequence[Fraction], measures: Sequence[Fraction], p: Fraction) -> Fraction | float:
    """(Σ |a_i|^p μ_i)^{1/p} for a simple function with disjoint supports."""
    if p == 1:
        return sum((abs(a) * m for a, m in zip(coefficients, measures)), Fraction(0))
    q = float(p)
    total = sum(abs(float(a)) ** q * float(m) for a, m in zip(coefficients, measures))
    return total ** (1.0 / q)


def _matches(value, reference, exact: bool) -> bool:
    if exact:
        return value == reference
    value, reference = float(value), float(reference)
    return abs(value - reference) <= _RELATIVE * max(abs(reference), 1e-12)


# ---------------------------------------------------------------------------
# Orthogonal refinement
# ---------------------------------------------------------------------------


def common_orthogonal_refinement(lattice: Lattice, elements: Sequence[int]) -> Optional[list[int]]:
    """Pairwise orthogonal pieces whose joins recover every input, or None."""
    pieces = list(dict.fromkeys(e for e in elements if e != lattice.bottom))
    guard = lattice.size**2
    for _ in range(guard):
        pair = next(
            (
                (i, j)
                for i in range(len(pieces))
                for j in range(i + 1, len(pieces))
                if lattice.meet(pieces[i], pieces[j]) != lattice.bottom
            ),
            None,
        )
        if pair is None:
            break
        i, j = pair
        first, second = pieces[i], pieces[j]
        common = lattice.meet(first, second)
        rest = lattice.ortho(common)
        replaced = [lattice.meet(first, rest), common, lattice.meet(second, rest)]
        remaining = [p for k, p in enumerate(pieces) if k not in (i, j)]
        pieces = list(dict.fromkeys(e for e in remaining + replaced if e != lattice.bottom))
    else:
        return None

    for a in pieces:
        for b in pieces:
            if a != b and not lattice.leq(b, lattice.ortho(a)):
                return None
    for e in elements:
        if e == lattice.bottom:
            continue
        covering = lattice.bottom
        for piece in pieces:
            if lattice.leq(piece, e):
                covering = lattice.join(covering, piece)
        if covering != e:
            return None
    return sorted(pieces)


# ---------------------------------------------------------------------------
# Embedding theorem
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Embedding:
    source: Lattice
    mu: tuple[Fraction, ...]
    target: NormContext
    j: tuple[int, ...]


def load_embedding(model: EmbeddingFile, p: Fraction | int | str = 1) -> Embedding:
    source = from_file(model.source, name="source")
    target = from_file(model.target, name="target")
    mu = check_submeasure(source, model.mu)
    phi = check_submeasure(target, model.phi)
    ctx = make_context(build(target), phi, p)
    j = []
    for label in source.elements:
        if label not in model.j:
            raise InvalidInput(f"j is undefined on {label!r}", element=label)
        j.append(target.index(model.j[label]))
    return Embedding(source, mu.values, ctx, tuple(j))


def embedding_violations(e: Embedding) -> list[str]:
    source, target, ctx = e.source, e.target.lattice, e.target
    phi = ctx.phi.values
    violations = []
    if not is_boolean(source):
        violations.append("source is not a Boolean algebra")
    n = source.size
    if any(
        source.leq(a, b) != target.leq(e.j[a], e.j[b]) for a in range(n) for b in range(n)
    ):
        violations.append("j is not an order-embedding")
    if any(
        e.mu[source.join(a, b)] != e.mu[a] + e.mu[b]
        for a in range(n)
        for b in range(n)
        if a != b and source.meet(a, b) == source.bottom
    ):
        violations.append("μ is not additive on disjoint joins")
    if any(e.mu[a] != phi[e.j[a]] for a in range(n)):
        violations.append("μ(M) != φ(j(M))")
    if not ctx.phi.orthoadditive:
        violations.append("φ is not orthoadditive")
    return violations


def check_embedding_isometry(
    e: Embedding, seed: int = 0, sample_size: Optional[int] = None
) -> EmbeddingReport:
    """‖Σ a_i⊗j(A_i)‖ = (Σ|a_i|^p μ(A_i))^{1/p} on deterministic and seeded coefficient vectors."""
    violations = embedding_violations(e)
    if violations:
        raise HypothesisUnmet(violations)
    ctx, source = e.target, e.source
    space, lattice = ctx.space, ctx.lattice

    def q(i: int) -> Vector:
        return space.q(i)

    well_defined = linalg.is_zero(q(e.j[source.bottom])) and all(
        linalg.is_zero(
            linalg.sub(
                linalg.add(q(e.j[a]), q(e.j[b])),
                linalg.add(q(e.j[source.join(a, b)]), q(e.j[source.meet(a, b)])),
            )
        )
        for a in range(source.size)
        for b in range(a + 1, source.size)
    )

    atoms = source.atoms()
    count = settings.sample_size if sample_size is None else sample_size
    coefficients = sign_patterns(len(atoms)) + random_rationals(make_rng(seed), len(atoms), count)
    report = EmbeddingReport(
        p=format_rational(ctx.p),
        seed=seed,
        samples=len(coefficients),
        well_defined=well_defined,
        exact_matches=0,
    )
    measures = [e.mu[a] for a in atoms]
    for coeffs in coefficients:
        x = space.vector([(c, e.j[a]) for c, a in zip(coeffs, atoms)])
        result = norm(ctx, x)
        reference = classical_norm(coeffs, measures, ctx.p)
        if _matches(result.value, reference, ctx.exact):
            report.exact_matches += 1
        else:
            report.violations.append(
                SampleViolation(
                    vector=format_vector(coeffs),
                    detail=f"norm {result.value} != classical {reference}",
                )
            )
        _refinement_cross_check(report, ctx, atoms, e.j, coeffs, result)
    logger.info(
        "Embedding check: %d/%d samples match, %d refinement checks",
        report.exact_matches,
        report.samples,
        report.refinement_checks,
    )
    return report


def _refinement_cross_check(report, ctx: NormContext, atoms, j, coeffs, result) -> None:
    lattice = ctx.lattice
    used = [j[a] for c, a in zip(coeffs, atoms) if c]
    witness = [lattice.index(label) for _, label in result.witness]
    pieces = common_orthogonal_refinement(lattice, used + witness)
    if pieces is None:
        return
    refined = []
    for piece in pieces:
        refined.append(
            sum((c for c, a in zip(coeffs, atoms) if c and lattice.leq(piece, j[a])), Fraction(0))
        )
    value = classical_norm(refined, [ctx.phi.values[piece] for piece in pieces], ctx.p)
    report.refinement_checks += 1
    if not _matches(result.value, value, ctx.exact):
        report.refinement_mismatches.append(
            SampleViolation(
                vector=format_vector(coeffs),
                detail=f"refined optimum {value} != direct optimum {result.value}",
            )
        )


# ---------------------------------------------------------------------------
# Algebrifications
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Algebrification:
    """h: L → 2^k given by one join-prime generator per target atom."""

    generators: tuple[int, ...]
    measure: tuple[Fraction, ...]
    h: tuple[int, ...]
    t_matrix: tuple[Vector, ...]

    @property
    def atoms(self) -> int:
        return len(self.generators)

    def to_model(self, lattice: Lattice) -> AlgebrificationModel:
        return AlgebrificationModel(
            atoms=self.atoms,
            atom_measures=[format_rational(m) for m in self.measure],
            h={
                lattice.label(i): [k for k in range(self.atoms) if mask >> k & 1]
                for i, mask in enumerate(self.h)
            },
            t_matrix=[format_vector(row) for row in self.t_matrix],
        )


def measure_grid(values: Sequence[Fraction], cap: Optional[int] = None) -> list[Fraction]:
    """Closure of the φ values under + and − inside [0, 1], truncated to ``cap`` candidates."""
    cap = settings.measure_grid_cap if cap is None else cap
    grid = set(values) | {Fraction(0), Fraction(1)}
    while len(grid) <= cap:
        grown = set(grid)
        for a in grid:
            for b in grid:
                if a + b <= 1:
                    grown.add(a + b)
                grown.add(abs(a - b))
        if grown == grid:
            break
        grid = grown
    return sorted(grid)[:cap]


def _compositions(grid: Sequence[Fraction], k: int) -> list[tuple[Fraction, ...]]:
    positive = [g for g in grid if g > 0]
    out: list[tuple[Fraction, ...]] = []

    def extend(prefix: tuple[Fraction, ...], remaining: Fraction) -> None:
        if len(prefix) == k - 1:
            if remaining in positive:
                out.append(prefix + (remaining,))
            return
        for g in positive:
            if g >= remaining:
                break
            extend(prefix + (g,), remaining - g)

    if k == 1:
        return [(Fraction(1),)] if Fraction(1) in positive else []
    extend((), Fraction(1))
    return out


def _hom_image(lattice: Lattice, generators: Sequence[int]) -> tuple[int, ...]:
    return tuple(
        sum(1 << k for k, a in enumerate(generators) if lattice.leq(a, x))
        for x in range(lattice.size)
    )


def is_homomorphism(lattice: Lattice, h: Sequence[int], k: int) -> bool:
    full = (1 << k) - 1
    if h[lattice.bottom] != 0 or h[lattice.top] != full:
        return False
    return all(
        h[lattice.meet(x, y)] == h[x] & h[y] and h[lattice.join(x, y)] == h[x] | h[y]
        for x in range(lattice.size)
        for y in range(x, lattice.size)
    )


def find_algebrifications(
    ctx: NormContext,
    max_atoms: int,
    p: Fraction | int | str | None = None,
    seed: int = 0,
    sample_size: Optional[int] = None,
) -> list[Algebrification]:
    """Exhaustive search over homomorphisms into 2^k and atom measures from the φ grid."""
    if not 1 <= max_atoms <= 6:
        raise InvalidInput("max_atoms must lie in [1, 6]", max_atoms=max_atoms)
    if p is not None:
        ctx = ctx.with_p(p)
    lattice, space = ctx.lattice, ctx.space

    phistar = derive_phistar(ctx.with_p(1))
    nulls = phistar.null_elements()
    primes = [a for a in join_primes(lattice) if not any(lattice.leq(a, z) for z in nulls)]
    kernel = [v.coords for v in kernel_basis(ctx)]
    quotient_dim = space.x_dim - len(kernel)
    if not primes or quotient_dim > max_atoms or quotient_dim == 0:
        logger.info("No algebrification candidates (primes=%d, quotient dim=%d)", len(primes), quotient_dim)
        return []
    k = quotient_dim
    compositions = _compositions(measure_grid(ctx.phi.values), k)
    size = len(primes) ** k * len(compositions)
    if size > settings.search_cap:
        raise SearchSpaceExceeded(
            f"{size} candidates exceed the cap of {settings.search_cap}", size=size, cap=settings.search_cap
        )

    samples = sample_vectors(space, seed, sample_size)
    norms = [norm(ctx, x).value for x in samples]
    results: list[Algebrification] = []
    for generators in product(primes, repeat=k):
        h = _hom_image(lattice, generators)
        if not is_homomorphism(lattice, h, k):
            continue
        t_matrix = linalg.transpose([_indicator(h[b], k) for b in space.basis_elements])
        if not all(
            linalg.mat_vec(t_matrix, space.q(x)) == _indicator(h[x], k) for x in range(lattice.size)
        ):
            continue
        if any(not linalg.is_zero(linalg.mat_vec(t_matrix, z)) for z in kernel):
            continue
        if linalg.rank(t_matrix) != k:
            continue
        images = [linalg.mat_vec(t_matrix, x.coords) for x in samples]
        for measure in compositions:
            if all(
                _matches(value, classical_norm(image, measure, ctx.p), ctx.exact)
                for value, image in zip(norms, images)
            ):
                results.append(Algebrification(tuple(generators), measure, h, t_matrix))
    logger.info("Algebrification search over %d candidates found %d", size, len(results))
    return results


def _indicator(mask: int, k: int) -> Vector:
    return tuple(Fraction(mask >> i & 1) for i in range(k))


def uniqueness_probe(results: Sequence[Algebrification], p: Fraction | int | str) -> UniquenessReport:
    """All results should be isomorphic measure algebras: equal atom-measure multisets."""
    exponent = parse_rational(p)
    if exponent == 2:
        return UniquenessReport(
            p=format_rational(exponent), applicable=False, results=len(results), isomorphic=True
        )
    counterexamples = []
    if results:
        reference = sorted(results[0].measure)
        for i, result in enumerate(results[1:], start=1):
            if sorted(result.measure) != reference:
                counterexamples.append([0, i])
    return UniquenessReport(
        p=format_rational(exponent),
        applicable=True,
        results=len(results),
        isomorphic=not counterexamples,
        counterexamples=counterexamples,
    )
