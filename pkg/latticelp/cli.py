"""Command-line entry point.

Every command prints one JSON document on stdout (or its human rendering)
and logs to stderr. Exit status: 0 success, 1 domain error or failed
verification, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Callable, Optional, Sequence

from pydantic import BaseModel, ValidationError

from latticelp import __version__
from latticelp.cases import case_names, catalog_case, catalog_embedding, verify_examples
from latticelp.config import settings
from latticelp.density import (
    INDICATORS,
    check_algebra,
    density_report,
    diagonal_join,
    dsystem_check,
    generate_algebra,
    parse_chain,
    parse_set,
)
from latticelp.errors import InvalidInput, LatticeLPError
from latticelp.framework import (
    broken_evaluator,
    broken_support,
    build_instance,
    check_framework,
    counting_instance,
    filter_limit,
    lemma_premises_check,
)
from latticelp.lattice import catalog, check_laws, from_file, serialize
from latticelp.linalg import Vector
from latticelp.metrics import CLI_INVOCATIONS
from latticelp.models import FrameworkDescriptor, read_embedding_file, read_lattice_file
from latticelp.morphisms import (
    check_embedding_isometry,
    find_algebrifications,
    load_embedding,
    uniqueness_probe,
)
from latticelp.norm import (
    NormContext,
    derive_phistar,
    kernel_basis,
    make_context,
    norm,
    phistar_invariance,
    semantics_probe,
    triangle_check,
)
from latticelp.projections import (
    build_projections,
    check_contractivity,
    check_order_characterization,
    check_pythagoras,
    ordered_space_check,
)
from latticelp.quotient import build, parse_vector
from latticelp.rational import format_rational, format_vector
from latticelp.sampling import sample_vectors
from latticelp.submeasure import check_submeasure

logger = logging.getLogger("latticelp.cli")

CASE_PREFIX = "case:"


# ---------------------------------------------------------------------------
# Input loading
# ---------------------------------------------------------------------------


def _read(reader: Callable, path: str):
    try:
        return reader(path)
    except OSError as exc:
        raise InvalidInput(f"cannot read {path}: {exc.strerror}", file=path) from exc
    except ValidationError as exc:
        raise InvalidInput(f"malformed input file {path}", file=path, errors=exc.error_count()) from exc


def load_context(source: str, p: str = "1", semantics: str = "disjoint") -> NormContext:
    """A lattice file with ``phi``, or ``case:NAME`` for a catalog pair."""
    if source.startswith(CASE_PREFIX):
        return catalog_case(source[len(CASE_PREFIX):], p, semantics)
    model = _read(read_lattice_file, source)
    if model.phi is None:
        raise InvalidInput(f"{source} carries no phi values", file=source)
    lattice = from_file(model, name=Path(source).stem)
    return make_context(build(lattice), check_submeasure(lattice, model.phi), p, semantics)


def _dump(value: Any) -> Any:
    if isinstance(value, BaseModel):
        return value.model_dump(mode="json")
    if isinstance(value, list):
        return [_dump(v) for v in value]
    if isinstance(value, dict):
        return {k: _dump(v) for k, v in value.items()}
    return value


# ---------------------------------------------------------------------------
# lattice
# ---------------------------------------------------------------------------


def cmd_lattice_check(args) -> dict:
    if args.file.startswith(CASE_PREFIX):
        lattice = catalog_case(args.file[len(CASE_PREFIX):]).lattice
    else:
        lattice = from_file(_read(read_lattice_file, args.file), name=Path(args.file).stem)
    return {"size": lattice.size, "report": _dump(check_laws(lattice))}


def cmd_lattice_catalog(args) -> dict:
    lattice = catalog(args.name)
    return {"name": args.name, "lattice": _dump(serialize(lattice)), "report": _dump(check_laws(lattice))}


# ---------------------------------------------------------------------------
# lp
# ---------------------------------------------------------------------------


def cmd_lp_basis(args) -> dict:
    space = load_context(args.file).space
    lattice = space.lattice
    return {
        "x_dim": space.x_dim,
        "delta_dim": len(space.delta_basis),
        "basis": space.basis_labels,
        "q": {lattice.label(i): format_vector(space.q(i)) for i in range(lattice.size)},
    }


def cmd_lp_norm(args) -> dict:
    ctx = load_context(args.file, args.p, args.semantics)
    x = parse_vector(ctx.space, args.vector)
    return {"p": format_rational(ctx.p), "vector": str(x), "norm": _dump(norm(ctx, x).to_model())}


def cmd_lp_kernel(args) -> dict:
    ctx = load_context(args.file, args.p)
    basis = kernel_basis(ctx)
    return {
        "p": format_rational(ctx.p),
        "dimension": len(basis),
        "basis": [format_vector(v.coords) for v in basis],
        "coordinates": ctx.space.basis_labels,
    }


def cmd_lp_phistar(args) -> dict:
    ctx = load_context(args.file)
    phistar = derive_phistar(ctx)
    again = derive_phistar(ctx.with_phi(phistar))
    return {
        "phi": ctx.phi.as_dict(),
        "phistar": phistar.as_dict(),
        "dominated": all(s <= f for s, f in zip(phistar.values, ctx.phi.values)),
        "order_preserving": phistar.order_preserving,
        "subadditive": phistar.subadditive,
        "orthoadditive": phistar.orthoadditive,
        "idempotent": again.same_values(phistar),
        "invariance": _phistar_invariance(ctx, phistar, args.seed),
    }


def _phistar_invariance(ctx: NormContext, phistar, seed: int) -> dict:
    samples = sample_vectors(ctx.space, seed)
    reports = {"p1": phistar_invariance(ctx, samples, seed, phistar)}
    if ctx.semantics == "disjoint":
        reports["p1_any"] = phistar_invariance(ctx.with_p(1, "any"), samples, seed)
    reports["p2"] = phistar_invariance(ctx.with_p(2, "disjoint"), samples, seed)
    return _dump(reports)


def _matrix(rows: Sequence[Vector]) -> list[list[str]]:
    return [format_vector(r) for r in rows]


def cmd_lp_project(args) -> dict:
    ctx = load_context(args.file, args.p)
    x = parse_vector(ctx.space, args.vector)
    pair = build_projections(ctx, args.m)
    px, qx = pair.project(x, ctx.space)
    return {
        "m": args.m,
        "split_basis": list(pair.basis),
        "p_matrix": _matrix(pair.p_matrix),
        "q_matrix": _matrix(pair.q_matrix),
        "Px": str(px),
        "Qx": str(qx),
        "norms": {
            "x": _dump(norm(ctx, x).to_model()),
            "Px": _dump(norm(ctx, px).to_model()),
            "Qx": _dump(norm(ctx, qx).to_model()),
        },
    }


def cmd_lp_pythagoras(args) -> dict:
    report = check_pythagoras(load_context(args.file, args.p), args.m, seed=args.seed)
    return {"passed": report.ok, "report": _dump(report)}


def cmd_lp_contractivity(args) -> dict:
    ctx = load_context(args.file, args.p)
    contractivity = check_contractivity(ctx, args.m, seed=args.seed)
    order = check_order_characterization(ctx, args.m, seed=args.seed)
    return {
        "passed": contractivity.ok and not order.violations,
        "contractivity": _dump(contractivity),
        "order": _dump(order),
    }


def cmd_lp_ordered(args) -> dict:
    report = ordered_space_check(load_context(args.file, args.p), seed=args.seed)
    return {"passed": report.ok, "report": _dump(report)}


def cmd_lp_probe(args) -> dict:
    ctx = load_context(args.file)
    samples = sample_vectors(ctx.space, args.seed)
    return {
        "semantics": _dump(semantics_probe(ctx, samples, seed=args.seed)),
        "triangle": {
            name: _dump(triangle_check(ctx.with_p(1, name), samples, seed=args.seed))
            for name in ("disjoint", "any")
        },
    }


def cmd_lp_verify_examples(args) -> dict:
    report = verify_examples(args.seed)
    return {"passed": report.passed, "report": _dump(report)}


# ---------------------------------------------------------------------------
# embed / algebrify
# ---------------------------------------------------------------------------


def cmd_embed_check(args) -> dict:
    if args.file.startswith(CASE_PREFIX):
        model = catalog_embedding(args.file[len(CASE_PREFIX):])
    else:
        model = _read(read_embedding_file, args.file)
    report = check_embedding_isometry(load_embedding(model, args.p), seed=args.seed)
    return {"passed": report.ok, "report": _dump(report)}


def cmd_algebrify(args) -> dict:
    ctx = load_context(args.file, args.p)
    results = find_algebrifications(ctx, args.max_atoms, seed=args.seed)
    return {
        "count": len(results),
        "algebrifications": [_dump(r.to_model(ctx.lattice)) for r in results],
        "uniqueness": _dump(uniqueness_probe(results, ctx.p)),
    }


# ---------------------------------------------------------------------------
# density
# ---------------------------------------------------------------------------


def cmd_density_of(args) -> dict:
    horizons = args.horizon or [10**3, 10**4, 10**5]
    return _dump(density_report(parse_set(args.expr), horizons))


def cmd_density_algebra(args) -> dict:
    algebra = generate_algebra([parse_set(e) for e in args.exprs])
    return _dump(check_algebra(algebra, seed=args.seed))


def cmd_density_dsystem(args) -> dict:
    report = dsystem_check([parse_set(e) for e in args.exprs])
    return {"passed": report.ok, "report": _dump(report)}


def cmd_density_chain_join(args) -> dict:
    join = diagonal_join(parse_chain(args.spec), args.depth, horizon=args.horizon)
    return _dump(join.report)


# ---------------------------------------------------------------------------
# framework
# ---------------------------------------------------------------------------

_CONTROLS = {"broken_evaluator": broken_evaluator, "broken_support": broken_support}


def _read_descriptor(path: str) -> FrameworkDescriptor:
    return FrameworkDescriptor.model_validate_json(Path(path).read_text(encoding="utf-8"))


def _instance(args):
    if getattr(args, "descriptor", None):
        return build_instance(_read(_read_descriptor, args.descriptor))
    factory = _CONTROLS.get(getattr(args, "control", None) or "", counting_instance)
    return factory(args.group, args.i_max, args.fragment_size)


def cmd_framework_axioms(args) -> dict:
    report = check_framework(_instance(args))
    return {"passed": not report.violations, "report": _dump(report)}


def cmd_framework_lemma(args) -> dict:
    return _dump(lemma_premises_check(_instance(args), args.spec, depth=args.depth, horizon=args.horizon))


def cmd_framework_limit(args) -> dict:
    name = args.expr.strip()
    x = INDICATORS[name] if name in INDICATORS else parse_set(args.expr)
    return _dump(filter_limit(_instance(args), x, tolerance=args.tolerance, horizon=args.horizon))


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="latticelp",
        description="L^p spaces over finite lattices and exact natural density",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--output", choices=["json", "human"], default="json")
    parser.add_argument("--seed", type=int, default=0, help="Seed for sampled checks")
    parser.add_argument("--log-level", default=settings.log_level)
    groups = parser.add_subparsers(dest="area", required=True)

    def command(sub, name: str, handler, help_text: str):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(handler=handler, command=f"{sub.dest} {name}")
        return p

    lattice = groups.add_parser("lattice", help="Lattice validation and catalog")
    lsub = lattice.add_subparsers(dest="lattice", required=True)
    command(lsub, "check", cmd_lattice_check, "Validate a lattice file and scan its laws").add_argument("file")
    command(lsub, "catalog", cmd_lattice_catalog, "Print a catalog lattice").add_argument("name")

    lp = groups.add_parser("lp", help=f"Semi-normed spaces (FILE may be {CASE_PREFIX}{'|'.join(case_names())})")
    psub = lp.add_subparsers(dest="lp", required=True)
    command(psub, "basis", cmd_lp_basis, "Quotient basis and coordinates").add_argument("file")
    p = command(psub, "norm", cmd_lp_norm, "Evaluate the semi-norm")
    p.add_argument("file")
    p.add_argument("--p", default="1")
    p.add_argument("--vector", required=True)
    p.add_argument("--semantics", choices=["disjoint", "any"], default="disjoint")
    p = command(psub, "kernel", cmd_lp_kernel, "Kernel of the semi-norm")
    p.add_argument("file")
    p.add_argument("--p", default="1")
    command(psub, "phistar", cmd_lp_phistar, "Derived submeasure").add_argument("file")
    for name, handler, help_text in (
        ("project", cmd_lp_project, "Projections P_M and Q_M"),
        ("pythagoras", cmd_lp_pythagoras, "‖x‖^p = ‖Px‖^p + ‖Qx‖^p on samples"),
        ("contractivity", cmd_lp_contractivity, "Contractivity and order characterization"),
    ):
        p = command(psub, name, handler, help_text)
        p.add_argument("file")
        p.add_argument("--m", required=True)
        p.add_argument("--p", default="1")
        if name == "project":
            p.add_argument("--vector", required=True)
    p = command(psub, "ordered", cmd_lp_ordered, "Monotonicity and saliency")
    p.add_argument("file")
    p.add_argument("--p", default="1")
    command(psub, "probe", cmd_lp_probe, "Compare any/disjoint dominance and the triangle inequality at p=1").add_argument("file")
    command(psub, "verify-examples", cmd_lp_verify_examples, "Run the four worked-example checks")

    embed = groups.add_parser("embed", help="Embedding isometry")
    esub = embed.add_subparsers(dest="embed", required=True)
    p = command(esub, "check", cmd_embed_check, "Check an embedding file or case:NAME")
    p.add_argument("file")
    p.add_argument("--p", default="1")

    p = groups.add_parser("algebrify", help="Search for algebrifications")
    p.set_defaults(handler=cmd_algebrify, command="algebrify")
    p.add_argument("file")
    p.add_argument("--p", default="1")
    p.add_argument("--max-atoms", type=int, default=3)

    density = groups.add_parser("density", help="Natural density")
    dsub = density.add_subparsers(dest="density", required=True)
    p = command(dsub, "of", cmd_density_of, "Density and horizon counts of a set expression")
    p.add_argument("expr")
    p.add_argument("--horizon", type=int, action="append")
    command(dsub, "algebra", cmd_density_algebra, "Generated algebra").add_argument("exprs", nargs="*")
    command(dsub, "dsystem", cmd_density_dsystem, "d-system closure").add_argument("exprs", nargs="+")
    p = command(dsub, "chain-join", cmd_density_chain_join, "Diagonal join of a chain")
    p.add_argument("spec")
    p.add_argument("--depth", type=int, default=8)
    p.add_argument("--horizon", type=int, default=10**6)

    framework = groups.add_parser("framework", help="Limit framework on the counting instance")
    fsub = framework.add_subparsers(dest="framework", required=True)
    for name, handler, help_text in (
        ("axioms", cmd_framework_axioms, "Exhaustive axiom scan"),
        ("lemma", cmd_framework_lemma, "Countable additivity premises along a chain"),
        ("limit", cmd_framework_limit, "Limit along the filter"),
    ):
        p = command(fsub, name, handler, help_text)
        p.add_argument("--group", dest="group", choices=["additive", "multiplicative"], default="additive")
        p.add_argument("--i-max", type=int, default=32)
        p.add_argument("--fragment-size", type=int, default=8)
        p.add_argument("--descriptor", help="Instance descriptor JSON file")
        if name == "axioms":
            p.add_argument("--control", choices=sorted(_CONTROLS))
        if name == "lemma":
            p.add_argument("spec")
            p.add_argument("--depth", type=int, default=8)
            p.add_argument("--horizon", type=int, default=10**6)
        if name == "limit":
            p.add_argument("expr")
            p.add_argument("--tolerance", type=float, default=1e-2)
            p.add_argument("--horizon", type=int, default=2**20)
    return parser


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------


def render_human(value: Any, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(value, dict):
        lines = []
        for key, item in value.items():
            if isinstance(item, (dict, list)) and item:
                lines.append(f"{pad}{key}:")
                lines.append(render_human(item, indent + 1))
            else:
                lines.append(f"{pad}{key}: {item}")
        return "\n".join(lines)
    if isinstance(value, list):
        if all(not isinstance(v, (dict, list)) for v in value):
            return f"{pad}{', '.join(map(str, value))}"
        return "\n".join(
            f"{pad}-\n{render_human(item, indent + 1)}" if isinstance(item, (dict, list)) else f"{pad}- {item}"
            for item in value
        )
    return f"{pad}{value}"


def _emit(payload: dict, mode: str) -> None:
    if mode == "human":
        print(render_human(payload))
    else:
        print(json.dumps(payload, indent=2, ensure_ascii=False))


# ---------------------------------------------------------------------------
# Main
# ---------------------------------------------------------------------------


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=args.log_level.upper(),
        format="%(asctime)s | %(name)s | %(levelname)s | %(message)s",
        stream=sys.stderr,
        force=True,
    )
    command = args.command
    logger.info("Running %s (seed=%d)", command, args.seed)
    try:
        result = args.handler(args)
    except LatticeLPError as exc:
        logger.error("%s failed: %s", command, exc)
        _emit(exc.to_dict(), args.output)
        CLI_INVOCATIONS.labels(command=command, exit_code="1").inc()
        return 1

    passed = result.get("passed", True) if isinstance(result, dict) else True
    payload = {"status": "success" if passed else "failure", "command": command, "seed": args.seed, "result": result}
    _emit(payload, args.output)
    code = 0 if passed else 1
    CLI_INVOCATIONS.labels(command=command, exit_code=str(code)).inc()
    return code


if __name__ == "__main__":
    sys.exit(main())
