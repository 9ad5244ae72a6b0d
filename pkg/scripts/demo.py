#!/usr/bin/env python3
"""
latticelp walkthrough

Steps through the catalog pairs: quotient basis, exact p = 1 norms, the
derived submeasure, a power-exponent bracket, the embedding check on MO2,
and the density engine on arithmetic progressions.
"""

import sys

from latticelp.cases import catalog_case, catalog_embedding
from latticelp.density import check_algebra, diagonal_join, dyadic_chain, generate_algebra, parse_set
from latticelp.errors import LatticeLPError
from latticelp.morphisms import check_embedding_isometry, load_embedding
from latticelp.norm import derive_phistar, norm
from latticelp.quotient import parse_vector

# ---------------------------------------------------------------------------
# ANSI colours
# ---------------------------------------------------------------------------
BOLD = "\033[1m"
DIM = "\033[2m"
RESET = "\033[0m"
CYAN = "\033[96m"
GREEN = "\033[92m"
YELLOW = "\033[93m"
RED = "\033[91m"
MAGENTA = "\033[95m"


def banner(text: str) -> None:
    width = 60
    print()
    print(f"{CYAN}{BOLD}{'=' * width}{RESET}")
    print(f"{CYAN}{BOLD}  {text}{RESET}")
    print(f"{CYAN}{BOLD}{'=' * width}{RESET}")
    print()


def step(number: int, title: str) -> None:
    print(f"\n{YELLOW}{BOLD}--- Step {number}: {title} ---{RESET}\n")


def info(msg: str) -> None:
    print(f"  {DIM}{msg}{RESET}")


def success(msg: str) -> None:
    print(f"  {GREEN}{msg}{RESET}")


def highlight(msg: str) -> None:
    print(f"  {MAGENTA}{BOLD}{msg}{RESET}")


# ---------------------------------------------------------------------------
# Steps
# ---------------------------------------------------------------------------


def show_basis() -> None:
    for name in ("example1", "m3", "n5"):
        space = catalog_case(name).space
        info(f"{name}: dim X = {space.x_dim}, basis {space.basis_labels}")


def show_norms() -> None:
    for name, expr in (("example1", "1*A - 1*B"), ("n5", "1*A + 1*B"), ("m3", "1*A + 1*B")):
        ctx = catalog_case(name)
        result = norm(ctx, parse_vector(ctx.space, expr))
        success(f"{name}: ‖{expr}‖₁ = {result.value}")


def show_phistar() -> None:
    ctx = catalog_case("n5")
    phistar = derive_phistar(ctx)
    info(f"φ  = {ctx.phi.as_dict()}")
    highlight(f"φ* = {phistar.as_dict()}")


def show_power_norm() -> None:
    ctx = catalog_case("m3", 2)
    result = norm(ctx, ctx.space.unit("A"))
    success(f"m3: ‖1⊗A‖₂ ≈ {float(result.value):.8f} in [{float(result.lower):.8f}, {float(result.upper):.8f}]")


def show_embedding() -> None:
    for name in ("boolean2-boolean3", "boolean2-mo2"):
        report = check_embedding_isometry(load_embedding(catalog_embedding(name)))
        if report.ok:
            success(f"{name}: isometric on {report.samples} samples")
        else:
            print(f"  {RED}{name}: {len(report.violations)} violations, e.g. {report.violations[0].detail}{RESET}")


def show_density() -> None:
    report = check_algebra(generate_algebra([parse_set("AP(2,0)"), parse_set("AP(3,0)")]))
    success(f"algebra of AP(2,0), AP(3,0): {report.members} members, additive={report.additive}")
    join = diagonal_join(dyadic_chain(), 8, horizon=10**6).report
    highlight(f"dyadic diagonal join: cutoffs {join.cutoffs[:4]}..., last ratio {join.ratios[-1]:.5f}")


def main() -> int:
    banner("latticelp walkthrough")
    steps = [
        ("Quotient bases", show_basis),
        ("Exact p = 1 norms", show_norms),
        ("Derived submeasure on N5", show_phistar),
        ("Power exponent with certified bracket", show_power_norm),
        ("Embedding isometry", show_embedding),
        ("Natural density", show_density),
    ]
    for number, (title, run) in enumerate(steps, start=1):
        step(number, title)
        try:
            run()
        except LatticeLPError as exc:
            print(f"  {RED}{exc.code}: {exc}{RESET}")
            return 1
    banner("Done")
    return 0


if __name__ == "__main__":
    sys.exit(main())
