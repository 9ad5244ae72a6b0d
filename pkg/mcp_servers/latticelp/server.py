"""
Lattice L^p MCP Server

Exposes the semi-norm engine and the density calculator via the Model
Context Protocol. Runs on port 8005 with SSE transport.
"""

import logging
from datetime import datetime, timezone
from typing import Optional

from mcp.server.fastmcp import FastMCP
from prometheus_client import generate_latest
from pydantic import ValidationError

from latticelp.cases import catalog_case, verify_examples as run_examples
from latticelp.config import settings
from latticelp.density import check_algebra, density_report, generate_algebra, parse_set
from latticelp.errors import InvalidInput, LatticeLPError
from latticelp.lattice import catalog, check_laws, from_file, serialize
from latticelp.metrics import TOOL_INVOCATIONS
from latticelp.models import LatticeFile
from latticelp.norm import NormContext, derive_phistar, make_context, norm, phistar_invariance
from latticelp.quotient import build, parse_vector
from latticelp.sampling import sample_vectors
from latticelp.submeasure import check_submeasure

# ---------------------------------------------------------------------------
# Logging
# ---------------------------------------------------------------------------
logging.basicConfig(
    level=settings.log_level,
    format="%(asctime)s | %(name)s | %(levelname)s | %(message)s",
)
logger = logging.getLogger("latticelp-server")

# ---------------------------------------------------------------------------
# MCP server
# ---------------------------------------------------------------------------
mcp = FastMCP("latticelp", host=settings.mcp_host, port=settings.mcp_port)


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------


def _error(tool: str, exc: Exception) -> dict:
    TOOL_INVOCATIONS.labels(tool_name=tool, status="error").inc()
    if isinstance(exc, LatticeLPError):
        return exc.to_dict()
    return {"status": "error", "error": type(exc).__name__, "message": str(exc)}


def _success(tool: str, **payload) -> dict:
    TOOL_INVOCATIONS.labels(tool_name=tool, status="success").inc()
    return {"status": "success", **payload}


def _context(case: Optional[str], lattice: Optional[dict], p: str = "1", semantics: str = "disjoint") -> NormContext:
    if case:
        return catalog_case(case, p, semantics)
    if lattice is None:
        raise InvalidInput("pass either a catalog case name or a lattice with phi")
    model = LatticeFile.model_validate(lattice)
    if model.phi is None:
        raise InvalidInput("the lattice carries no phi values")
    built = from_file(model)
    return make_context(build(built), check_submeasure(built, model.phi), p, semantics)


# ---------------------------------------------------------------------------
# Tools
# ---------------------------------------------------------------------------


@mcp.tool()
def lattice_check(lattice: dict) -> dict:
    """Validate a finite lattice and scan its laws.

    Args:
        lattice: {"elements": [...], "order": [[a, b], ...], "ortho": {...}}

    Returns:
        Dictionary with the law report (modular, distributive, orthomodular).
    """
    logger.info("Tool lattice_check invoked: %d elements", len(lattice.get("elements", [])))
    try:
        built = from_file(LatticeFile.model_validate(lattice))
        return _success("lattice_check", size=built.size, report=check_laws(built).model_dump(mode="json"))
    except (LatticeLPError, ValidationError) as e:
        return _error("lattice_check", e)


@mcp.tool()
def lattice_catalog(name: str) -> dict:
    """Return a catalog lattice: chain_n, boolean_n, m3, n5, mo2 or o6."""
    logger.info("Tool lattice_catalog invoked: name='%s'", name)
    try:
        built = catalog(name)
        return _success(
            "lattice_catalog",
            lattice=serialize(built).model_dump(mode="json"),
            report=check_laws(built).model_dump(mode="json"),
        )
    except LatticeLPError as e:
        return _error("lattice_catalog", e)


@mcp.tool()
def lp_norm(
    vector: str,
    p: str = "1",
    case: Optional[str] = None,
    lattice: Optional[dict] = None,
    semantics: str = "disjoint",
) -> dict:
    """Evaluate ‖x‖ in L^p(L, φ).

    Args:
        vector: A vector expression such as "1*A - 1/2*B".
        p: Rational exponent in [1, 16].
        case: Catalog case name (example1, m3, n5, boolean_3, mo2, o6, ...).
        lattice: Alternatively a lattice file with "phi".
        semantics: "disjoint" (default) or "any" (p = 1 only).

    Returns:
        Dictionary with the exact value (p = 1) or a bracketed float and a witness.
    """
    logger.info("Tool lp_norm invoked: vector='%s' p=%s", vector, p)
    try:
        ctx = _context(case, lattice, p, semantics)
        x = parse_vector(ctx.space, vector)
        return _success("lp_norm", vector=str(x), norm=norm(ctx, x).to_model().model_dump(mode="json"))
    except (LatticeLPError, ValidationError) as e:
        return _error("lp_norm", e)


@mcp.tool()
def lp_phistar(case: Optional[str] = None, lattice: Optional[dict] = None) -> dict:
    """Derive φ*(A) = ‖1⊗A‖ in L¹(L, φ) and check that φ* leaves the L¹ norm unchanged."""
    logger.info("Tool lp_phistar invoked: case=%s", case)
    try:
        ctx = _context(case, lattice)
        phistar = derive_phistar(ctx)
        invariance = phistar_invariance(ctx, sample_vectors(ctx.space, 0), phistar=phistar)
        return _success(
            "lp_phistar",
            phi=ctx.phi.as_dict(),
            phistar=phistar.as_dict(),
            invariance=invariance.model_dump(mode="json"),
        )
    except (LatticeLPError, ValidationError) as e:
        return _error("lp_phistar", e)


@mcp.tool()
def density_of(expression: str) -> dict:
    """Exact natural density of a set expression, e.g. "AP(2,0) & AP(3,0)" or "AP(3,0) \\ SQUARES"."""
    logger.info("Tool density_of invoked: expression='%s'", expression)
    try:
        report = density_report(parse_set(expression))
        return _success("density_of", **report.model_dump(mode="json"))
    except LatticeLPError as e:
        return _error("density_of", e)


@mcp.tool()
def density_algebra(expressions: list[str]) -> dict:
    """Atoms, densities and the additivity check of the algebra generated by the sets."""
    logger.info("Tool density_algebra invoked: %d generators", len(expressions))
    try:
        report = check_algebra(generate_algebra([parse_set(e) for e in expressions]))
        return _success("density_algebra", **report.model_dump(mode="json"))
    except LatticeLPError as e:
        return _error("density_algebra", e)


@mcp.tool()
def verify_examples(seed: int = 0) -> dict:
    """Run the four worked-example checks."""
    logger.info("Tool verify_examples invoked: seed=%d", seed)
    try:
        report = run_examples(seed)
        return _success("verify_examples", passed=report.passed, **report.model_dump(mode="json"))
    except LatticeLPError as e:
        return _error("verify_examples", e)


@mcp.tool()
def metrics() -> dict:
    """Prometheus text exposition of the solver counters."""
    return _success("metrics", exposition=generate_latest().decode("utf-8"))


@mcp.tool()
def health_check() -> dict:
    """Check whether the latticelp server is healthy.

    Returns:
        Dictionary with server status and timestamp.
    """
    logger.info("Tool health_check invoked")
    return {
        "status": "healthy",
        "server": "latticelp",
        "timestamp": datetime.now(timezone.utc).isoformat(),
    }


# ---------------------------------------------------------------------------
# Entry-point
# ---------------------------------------------------------------------------
if __name__ == "__main__":
    logger.info("Starting latticelp MCP server on port %d ...", settings.mcp_port)
    mcp.run(transport="sse")
