"""Pydantic models for input files and JSON reports."""

from __future__ import annotations

from pathlib import Path
from typing import Literal, Optional, Union

from pydantic import BaseModel, Field, field_validator

from latticelp.rational import format_rational, parse_rational

RationalStr = str


def _normalize_rational_map(values: Optional[dict]) -> Optional[dict[str, str]]:
    if values is None:
        return None
    return {str(k): format_rational(parse_rational(v)) for k, v in values.items()}


# ---------------------------------------------------------------------------
# Input files
# ---------------------------------------------------------------------------


class LatticeFile(BaseModel):
    """A finite lattice given by any generating set of order pairs."""

    elements: list[str] = Field(..., min_length=1, description="Element identifiers")
    order: list[tuple[str, str]] = Field(
        default_factory=list, description="Generating [lo, hi] pairs"
    )
    ortho: Optional[dict[str, str]] = Field(default=None, description="Orthocomplement")
    phi: Optional[dict[str, RationalStr]] = Field(
        default=None, description="Submeasure values as num/den strings"
    )

    @field_validator("phi", mode="before")
    @classmethod
    def _phi_rationals(cls, value):
        return _normalize_rational_map(value)


class EmbeddingFile(BaseModel):
    """Boolean source algebra with measure, target lattice with submeasure, and the map j."""

    source: LatticeFile
    mu: dict[str, RationalStr]
    target: LatticeFile
    phi: dict[str, RationalStr]
    j: dict[str, str]

    @field_validator("mu", "phi", mode="before")
    @classmethod
    def _rationals(cls, value):
        return _normalize_rational_map(value)


class FrameworkDescriptor(BaseModel):
    """Filter-framework instance descriptor."""

    group: Literal["additive", "multiplicative"] = "additive"
    instance: Literal["counting"] = "counting"
    i_max: int = Field(default=32, gt=0)
    filter: Literal["cofinite"] = "cofinite"
    fragment_size: int = Field(default=8, gt=0, le=12)


def read_lattice_file(path: str | Path) -> LatticeFile:
    return LatticeFile.model_validate_json(Path(path).read_text(encoding="utf-8"))


def read_embedding_file(path: str | Path) -> EmbeddingFile:
    return EmbeddingFile.model_validate_json(Path(path).read_text(encoding="utf-8"))


# ---------------------------------------------------------------------------
# Lattice reports
# ---------------------------------------------------------------------------


class LatticeReport(BaseModel):
    """Structural law flags with the first failing witness, if any."""

    is_lattice: bool = True
    is_modular: bool
    is_distributive: bool
    is_ortholattice: Optional[bool] = None
    is_orthomodular: Optional[bool] = None
    counterexample: Optional[list[str]] = None
    counterexample_law: Optional[str] = None


# ---------------------------------------------------------------------------
# Norm results
# ---------------------------------------------------------------------------


class WitnessTerm(BaseModel):
    b: RationalStr
    B: str


class NormResultModel(BaseModel):
    value: Union[RationalStr, float]
    bracket: Optional[list[float]] = None
    witness: list[WitnessTerm] = Field(default_factory=list)
    semantics: Literal["disjoint", "any"]


class SampleViolation(BaseModel):
    """One sampled vector on which a checked identity failed."""

    vector: list[RationalStr]
    detail: str


class PythagorasReport(BaseModel):
    m: str
    p: RationalStr
    seed: int
    hypothesis_holds: bool
    hypothesis_failures: list[str] = Field(default_factory=list)
    samples: int = 0
    violations: list[SampleViolation] = Field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.hypothesis_holds and not self.violations


class ContractivityReport(BaseModel):
    m: str
    p: RationalStr
    seed: int
    samples: int
    violations: list[SampleViolation] = Field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


class OrderCharacterizationReport(BaseModel):
    m: str
    seed: int
    pairs: int
    ordered_pairs: int = 0
    violations: list[SampleViolation] = Field(default_factory=list)


class OrderedSpaceReport(BaseModel):
    seed: int
    monotone_pairs: int
    monotonicity_violations: list[SampleViolation] = Field(default_factory=list)
    lineality_dim: int
    ambient_lineality_dim: int
    saliency_violations: list[SampleViolation] = Field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.monotonicity_violations and not self.saliency_violations


class SemanticsProbeReport(BaseModel):
    seed: int
    samples: int
    agree: bool
    discrepancies: list[SampleViolation] = Field(default_factory=list)


class PhiStarInvarianceReport(BaseModel):
    """‖x‖ under φ against ‖x‖ under φ* on a sample, plus φ*(1)."""

    seed: int
    p: RationalStr
    semantics: Literal["disjoint", "any"]
    samples: int
    phistar_top: RationalStr
    top_is_one: bool
    agree: bool
    discrepancies: list[SampleViolation] = Field(default_factory=list)


class TriangleReport(BaseModel):
    seed: int
    p: RationalStr
    semantics: Literal["disjoint", "any"]
    pairs: int
    violations: list[SampleViolation] = Field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


class ExampleCheck(BaseModel):
    name: str
    passed: bool
    checked: int = 0
    detail: Optional[str] = None


class ExamplesReport(BaseModel):
    seed: int
    checks: list[ExampleCheck]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


# ---------------------------------------------------------------------------
# Morphism reports
# ---------------------------------------------------------------------------


class EmbeddingReport(BaseModel):
    p: RationalStr
    seed: int
    samples: int
    well_defined: bool
    exact_matches: int
    violations: list[SampleViolation] = Field(default_factory=list)
    refinement_checks: int = 0
    refinement_mismatches: list[SampleViolation] = Field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.well_defined and not self.violations and not self.refinement_mismatches


class AlgebrificationModel(BaseModel):
    atoms: int
    atom_measures: list[RationalStr]
    h: dict[str, list[int]]
    t_matrix: list[list[RationalStr]]


class UniquenessReport(BaseModel):
    p: RationalStr
    applicable: bool
    results: int
    isomorphic: bool
    counterexamples: list[list[int]] = Field(default_factory=list)


# ---------------------------------------------------------------------------
# Density reports
# ---------------------------------------------------------------------------


class DensityReport(BaseModel):
    expression: str
    density: RationalStr
    horizon_counts: list[tuple[int, int]] = Field(default_factory=list)
    error_bounds: list[float] = Field(default_factory=list)


class AlgebraReport(BaseModel):
    generators: list[str]
    atoms: list[str]
    atom_densities: list[RationalStr]
    members: int
    pairs_checked: int
    disjoint_pairs: int
    additive: bool
    complements_match: bool = True


class DSystemReport(BaseModel):
    members: int
    violations: list[str] = Field(default_factory=list)
    chains_checked: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations


class DiagonalJoinReport(BaseModel):
    depth: int
    cutoffs: list[int]
    epsilons: list[float]
    target: RationalStr
    horizon_counts: list[tuple[int, int]]
    ratios: list[float]
    tail_inclusion: list[bool]
    exact: bool


# ---------------------------------------------------------------------------
# Framework reports
# ---------------------------------------------------------------------------


class AxiomLine(BaseModel):
    """One report line per finitely checkable assumption."""

    name: str
    holds: bool
    checked: int = 0
    witness: Optional[str] = None


class FrameworkReport(BaseModel):
    group: str
    i_max: int
    lines: list[AxiomLine]
    metadata: dict[str, str] = Field(default_factory=dict)

    @property
    def violations(self) -> list[AxiomLine]:
        return [line for line in self.lines if not line.holds]


class LimitReport(BaseModel):
    value: Optional[str] = None
    exact: bool = False
    bound: Optional[float] = None
    divergent: bool = False
    witness: list[tuple[int, float]] = Field(default_factory=list)
    method: str


class LemmaReport(BaseModel):
    group: str
    depth: int
    gamma_cutoffs: list[int]
    target: RationalStr
    join: DiagonalJoinReport
    attained: bool
