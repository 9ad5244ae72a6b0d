"""Prometheus metrics for the solvers.

All metric objects are defined here so they can be imported from any module.
"""

from prometheus_client import Counter, Histogram

# ---------------------------------------------------------------------------
# Exact LP
# ---------------------------------------------------------------------------

LP_SOLVES = Counter(
    "latticelp_lp_solves_total",
    "Exact simplex solves",
    ["status"],  # optimal, infeasible, unbounded
)

# ---------------------------------------------------------------------------
# Norm engine
# ---------------------------------------------------------------------------

NORM_EVALUATIONS = Counter(
    "latticelp_norm_evaluations_total",
    "Semi-norm evaluations",
    ["exponent", "semantics"],  # exponent: one, power
)

NORM_DURATION = Histogram(
    "latticelp_norm_duration_seconds",
    "Duration of a single semi-norm evaluation",
    ["exponent"],
    buckets=(0.001, 0.005, 0.01, 0.05, 0.1, 0.5, 1.0, 5.0, 30.0),
)

FAMILY_ENUMERATIONS = Counter(
    "latticelp_family_enumerations_total",
    "Enumerations of maximal meet-zero families",
)

BARRIER_NEWTON_STEPS = Counter(
    "latticelp_barrier_newton_steps_total",
    "Damped Newton steps taken by the barrier solver",
)

# ---------------------------------------------------------------------------
# Entry points
# ---------------------------------------------------------------------------

CLI_INVOCATIONS = Counter(
    "latticelp_cli_invocations_total",
    "CLI invocations",
    ["command", "exit_code"],
)

TOOL_INVOCATIONS = Counter(
    "latticelp_tool_invocations_total",
    "MCP tool invocations",
    ["tool_name", "status"],
)
