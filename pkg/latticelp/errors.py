"""Exception hierarchy shared by every module.

Each error carries a stable ``code`` and a ``details`` dict so the CLI and
the MCP server can emit structured error payloads.
"""

from __future__ import annotations

from typing import Any


class LatticeLPError(Exception):
    """Base class for domain errors."""

    code = "LatticeLPError"

    def __init__(self, message: str, **details: Any) -> None:
        super().__init__(message)
        self.details = details

    def to_dict(self) -> dict[str, Any]:
        return {
            "status": "error",
            "error": self.code,
            "message": str(self),
            "details": {k: _plain(v) for k, v in sorted(self.details.items())},
        }


def _plain(value: Any) -> Any:
    if isinstance(value, (list, tuple, set, frozenset)):
        items = [_plain(v) for v in value]
        return sorted(items, key=str) if isinstance(value, (set, frozenset)) else items
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    return str(value)


# ---------------------------------------------------------------------------
# Input validation
# ---------------------------------------------------------------------------


class InvalidInput(LatticeLPError):
    code = "InvalidInput"


class UnknownElement(LatticeLPError):
    code = "UnknownElement"


class UnknownName(LatticeLPError):
    code = "UnknownName"


class ParseError(LatticeLPError):
    code = "ParseError"

    def __init__(self, message: str, position: int, **details: Any) -> None:
        super().__init__(f"{message} at position {position}", position=position, **details)
        self.position = position


# ---------------------------------------------------------------------------
# Lattice structure
# ---------------------------------------------------------------------------


class NotAPartialOrder(LatticeLPError):
    code = "NotAPartialOrder"


class NotALattice(LatticeLPError):
    code = "NotALattice"


class NoBounds(LatticeLPError):
    code = "NoBounds"


class BadOrtho(LatticeLPError):
    code = "BadOrtho"


class MissingOrtho(LatticeLPError):
    code = "MissingOrtho"


class LatticeTooLarge(LatticeLPError):
    code = "LatticeTooLarge"


class NotOrthomodular(LatticeLPError):
    code = "NotOrthomodular"


# ---------------------------------------------------------------------------
# Quotient space and norms
# ---------------------------------------------------------------------------


class DimensionMismatch(LatticeLPError):
    code = "DimensionMismatch"


class NonTermination(LatticeLPError):
    code = "NonTermination"


class ValueOutOfRange(LatticeLPError):
    code = "ValueOutOfRange"


class MissingElement(LatticeLPError):
    code = "MissingElement"


class BadEndpoints(LatticeLPError):
    code = "BadEndpoints"


class InvalidExponent(LatticeLPError):
    code = "InvalidExponent"


class SemanticsUnsupported(LatticeLPError):
    code = "SemanticsUnsupported"


class FamilyExplosion(LatticeLPError):
    code = "FamilyExplosion"


class NoSplitBasis(LatticeLPError):
    code = "NoSplitBasis"


# ---------------------------------------------------------------------------
# Morphisms
# ---------------------------------------------------------------------------


class HypothesisUnmet(LatticeLPError):
    code = "HypothesisUnmet"

    def __init__(self, violations: list[str]) -> None:
        super().__init__("theorem hypothesis unmet: " + "; ".join(violations), violations=violations)
        self.violations = violations


class SearchSpaceExceeded(LatticeLPError):
    code = "SearchSpaceExceeded"


# ---------------------------------------------------------------------------
# Density and filter framework
# ---------------------------------------------------------------------------


class UnsupportedCombination(LatticeLPError):
    code = "UnsupportedCombination"


class AtomExplosion(LatticeLPError):
    code = "AtomExplosion"


class NotIncreasing(LatticeLPError):
    code = "NotIncreasing"

    def __init__(self, index: int) -> None:
        super().__init__(f"chain is not increasing modulo null sets at step {index}", index=index)
        self.index = index


class ScheduleInvalid(LatticeLPError):
    code = "ScheduleInvalid"


class HorizonTooSmall(LatticeLPError):
    code = "HorizonTooSmall"


class PremiseFailed(LatticeLPError):
    code = "PremiseFailed"

    def __init__(self, name: str, message: str = "", **details: Any) -> None:
        super().__init__(f"premise failed: {name}" + (f" ({message})" if message else ""), premise=name, **details)
        self.premise = name
