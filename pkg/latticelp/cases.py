"""Catalog (lattice, submeasure) pairs and the worked-example checks."""

from __future__ import annotations

import logging
from fractions import Fraction
from typing import Optional

from latticelp.errors import UnknownName
from latticelp.lattice import Lattice, catalog, serialize
from latticelp.models import EmbeddingFile, ExampleCheck, ExamplesReport
from latticelp.morphisms import classical_norm
from latticelp.norm import NormContext, make_context, norm
from latticelp.quotient import build
from latticelp.rational import format_rational
from latticelp.sampling import make_rng, random_rationals, sign_patterns
from latticelp.submeasure import check_submeasure

logger = logging.getLogger(__name__)

_HALF = "1/2"

CASES: dict[str, tuple[str, dict[str, str]]] = {
    "example1": ("boolean_2", {"0": "0", "A": _HALF, "B": _HALF, "1": "1"}),
    "m3": ("m3", {"0": "0", "A": _HALF, "B": _HALF, "C": _HALF, "1": "1"}),
    "n5": ("n5", {"0": "0", "A": _HALF, "B": "1/4", "C": _HALF, "1": "1"}),
    "boolean_3": (
        "boolean_3",
        {"0": "0", "A": "1/3", "B": "1/3", "C": "1/3", "AB": "2/3", "AC": "2/3", "BC": "2/3", "1": "1"},
    ),
    "mo2": ("mo2", {"0": "0", "a": _HALF, "a'": _HALF, "b": _HALF, "b'": _HALF, "1": "1"}),
    "o6": ("o6", {"0": "0", "a": "1/3", "b": "1/3", "b'": "2/3", "a'": "2/3", "1": "1"}),
    "chain_3": ("chain_3", {"0": "0", "c1": _HALF, "1": "1"}),
    # φ(AB) < φ(A): valid values, not order-preserving
    "nonmonotone": (
        "boolean_3",
        {"0": "0", "A": "3/4", "B": "1/4", "C": "1/4", "AB": _HALF, "AC": "3/4", "BC": _HALF, "1": "1"},
    ),
}

_RELATIVE = 1e-6


def case_names() -> list[str]:
    return list(CASES)


def catalog_case(name: str, p: Fraction | int | str = 1, semantics: str = "disjoint") -> NormContext:
    if name not in CASES:
        raise UnknownName(f"no catalog case named {name!r}", name=name, known=case_names())
    lattice_name, values = CASES[name]
    lattice = catalog(lattice_name)
    phi = check_submeasure(lattice, values)
    return make_context(build(lattice), phi, p, semantics)


def uniform_boolean(n: int) -> NormContext:
    """boolean_n with φ(S) = |S| / n."""
    lattice = catalog(f"boolean_{n}")
    values = {
        lattice.label(i): Fraction(_rank(lattice, i), n) for i in range(lattice.size)
    }
    return make_context(build(lattice), check_submeasure(lattice, values), 1)


def _rank(lattice: Lattice, i: int) -> int:
    return sum(1 for a in lattice.atoms() if lattice.leq(a, i))


def _close(value: float, reference: float) -> bool:
    return abs(value - reference) <= _RELATIVE * max(abs(reference), 1e-12)


# ---------------------------------------------------------------------------
# Worked examples
# ---------------------------------------------------------------------------


def check_example_boolean_pair(seed: int = 0, count: int = 20) -> ExampleCheck:
    """‖a⊗A + b⊗B‖ on {0, A, B, 1} with φ(A) = φ(B) = 1/2 against ℓ^p(2)."""
    one = catalog_case("example1")
    two = one.with_p(2)
    check = ExampleCheck(name="example 1: four-element Boolean algebra", passed=True)
    for a, b in random_rationals(make_rng(seed), 2, count):
        x = one.space.vector([(a, "A"), (b, "B")])
        check.checked += 1
        exact = norm(one, x).value
        if exact != (abs(a) + abs(b)) / 2:
            check.passed = False
            check.detail = f"p=1 at ({a}, {b}): {format_rational(exact)}"
            break
        value = float(norm(two, x))
        reference = ((float(a) ** 2 + float(b) ** 2) / 2) ** 0.5
        if not _close(value, reference):
            check.passed = False
            check.detail = f"p=2 at ({a}, {b}): {value} vs {reference}"
            break
    return check


def check_example_m3() -> ExampleCheck:
    space = catalog_case("m3").space
    lattice = space.lattice
    qa, qb, qc, q1 = (space.q(lattice.index(x)) for x in ("A", "B", "C", "1"))
    doubled = tuple(2 * v for v in qa)
    failures = []
    if space.x_dim != 1:
        failures.append(f"dim X = {space.x_dim}")
    if not qa == qb == qc:
        failures.append("atoms differ in X")
    if q1 != doubled:
        failures.append("q(1) != 2 q(A)")
    return ExampleCheck(
        name="example 2: M3 collapses to one dimension",
        passed=not failures,
        checked=3,
        detail="; ".join(failures) or None,
    )


def check_example_n5(seed: int = 0, count: int = 20) -> ExampleCheck:
    ctx = catalog_case("n5")
    space = ctx.space
    lattice = space.lattice
    check = ExampleCheck(name="example 3: N5 is isometric to weighted ℓ¹(2)", passed=True)
    if space.x_dim != 2 or space.q(lattice.index("B")) != space.q(lattice.index("C")):
        return ExampleCheck(name=check.name, passed=False, detail="dim X != 2 or q(B) != q(C)")
    for a, b in random_rationals(make_rng(seed), 2, count):
        result = norm(ctx, space.vector([(a, "A"), (b, "B")]))
        check.checked += 1
        if result.value != abs(a) / 2 + abs(b) / 4:
            check.passed = False
            check.detail = f"({a}, {b}): {format_rational(result.value)}"
            break
        if any(label == "C" for _, label in result.witness):
            check.passed = False
            check.detail = f"({a}, {b}): witness uses C"
            break
    return check


def check_boolean_consistency(seed: int = 0, count: int = 50, sizes=(2, 3)) -> ExampleCheck:
    """Classical simple-function norms on boolean_n with the uniform measure."""
    check = ExampleCheck(name="Boolean algebras recover classical L^p", passed=True)
    for n in sizes:
        one = uniform_boolean(n)
        two = one.with_p(2)
        atoms = one.lattice.atoms()
        measures = [one.phi.values[a] for a in atoms]
        coefficients = sign_patterns(n) + random_rationals(make_rng(seed), n, count)
        for coeffs in coefficients:
            x = one.space.vector(list(zip(coeffs, atoms)))
            check.checked += 1
            if norm(one, x).value != classical_norm(coeffs, measures, 1):
                check.passed = False
                check.detail = f"boolean_{n} p=1 at {list(map(str, coeffs))}"
                return check
            if not _close(float(norm(two, x)), classical_norm(coeffs, measures, Fraction(2))):
                check.passed = False
                check.detail = f"boolean_{n} p=2 at {list(map(str, coeffs))}"
                return check
    return check


def verify_examples(seed: int = 0, count: Optional[int] = None) -> ExamplesReport:
    checks = [
        check_example_boolean_pair(seed),
        check_example_m3(),
        check_example_n5(seed),
        check_boolean_consistency(seed, count if count is not None else 50),
    ]
    report = ExamplesReport(seed=seed, checks=checks)
    logger.info("Worked examples: %d/%d pass", sum(c.passed for c in checks), len(checks))
    return report


# ---------------------------------------------------------------------------
# Embeddings
# ---------------------------------------------------------------------------

_EMBEDDINGS: dict[str, tuple[str, dict[str, str], str]] = {
    # the two atoms land on an orthogonal pair of MO2
    "boolean2-mo2": ("example1", {"0": "0", "A": "a", "B": "a'", "1": "1"}, "mo2"),
    "boolean2-boolean3": ("example1", {"0": "0", "A": "A", "B": "BC", "1": "1"}, "boolean_3"),
}


def embedding_names() -> list[str]:
    return list(_EMBEDDINGS)


def catalog_embedding(name: str) -> EmbeddingFile:
    """The source measure is μ = φ∘j."""
    if name not in _EMBEDDINGS:
        raise UnknownName(f"no catalog embedding named {name!r}", name=name, known=embedding_names())
    source_case, j, target_case = _EMBEDDINGS[name]
    source_name, _ = CASES[source_case]
    target_name, phi = CASES[target_case]
    mu = {label: phi[image] for label, image in j.items()}
    return EmbeddingFile(
        source=serialize(catalog(source_name)),
        mu=mu,
        target=serialize(catalog(target_name)),
        phi=phi,
        j=j,
    )
