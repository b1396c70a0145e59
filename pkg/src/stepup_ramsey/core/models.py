"""Pydantic models for configuration, reports and certificates.
"""
import logging
import os
from enum import Enum
from typing import Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from stepup_ramsey import CERTIFICATE_SCHEMA_VERSION

BUDGET_ENV_VAR = "STEPUP_RAMSEY_BUDGET"
DEFAULT_BUDGET = 10**8


def default_budget() -> int:
    """Return enumeration budget from the environment or the default."""
    raw = os.environ.get(BUDGET_ENV_VAR)
    if not raw:
        return DEFAULT_BUDGET
    try:
        value = int(raw)
    except ValueError:
        value = 0
    if value <= 0:
        logging.warning('Ignoring invalid %s=%r; using %s',
                        BUDGET_ENV_VAR, raw, DEFAULT_BUDGET)
        return DEFAULT_BUDGET
    return value


class Color(str, Enum):
    RED = "red"
    BLUE = "blue"


class RuleMatch(str, Enum):
    """Shape of a delta quadruple with respect to the red rules."""
    MONOTONE = "Monotone"
    ZIGZAG_RULE2 = "ZigzagRule2"
    ZIGZAG_RULE3 = "ZigzagRule3"
    EQUAL_ENDS_RULE4 = "EqualEndsRule4"
    VARIANT_RULE2 = "VariantRule2"
    NO_RULE = "NoRule"


class SearchBudget(BaseModel):
    """Limits for enumerations and searches."""
    max_subsets: int = Field(
        default_factory=default_budget, gt=0,
        description="Maximum number of subsets (or search nodes) to visit")
    max_seconds: Optional[float] = Field(
        None, gt=0, description="Optional wall-clock limit in seconds")
    workers: int = Field(1, gt=0, description="Degree of parallelism")


class RunConfig(BaseModel):
    """Validated configuration of one command line run."""
    subcommand: str
    n: Optional[int] = Field(None, ge=1)
    m: Optional[int] = Field(None, ge=2, description="Ground set size M")
    bit_width: Optional[int] = Field(None, ge=1)
    seed: Optional[int] = Field(None, ge=0, lt=2**64)
    budget: SearchBudget = Field(default_factory=SearchBudget)
    inputs: Dict[str, str] = Field(default_factory=dict)
    output: Optional[str] = None


class PropertyReport(BaseModel):
    """Outcome of checking delta Properties I-III on a vertex list."""
    passed: bool
    failed_property: Optional[str] = None
    witness: Optional[List[int]] = Field(
        None, description="Positions of the first violating tuple")


class AbcWitness(BaseModel):
    """Disjoint n-sets A, B, C and a bijection f: B -> C."""
    a_set: List[int] = Field(alias="A")
    b_set: List[int] = Field(alias="B")
    c_set: List[int] = Field(alias="C")
    f: Dict[int, int]

    model_config = ConfigDict(populate_by_name=True)

    @model_validator(mode="after")
    def check_structure(self):
        size = len(self.a_set)
        if len(self.b_set) != size or len(self.c_set) != size:
            raise ValueError("A, B and C must have equal size")
        union = set(self.a_set) | set(self.b_set) | set(self.c_set)
        if len(union) != 3 * size:
            raise ValueError("A, B and C must be pairwise disjoint")
        if sorted(self.f) != sorted(self.b_set):
            raise ValueError("f must be defined exactly on B")
        if sorted(self.f.values()) != sorted(self.c_set):
            raise ValueError("f must map B onto C")
        return self


class SteinerSystem(BaseModel):
    n: int = Field(ge=4)
    blocks: List[Tuple[int, int, int, int]] = Field(default_factory=list)

    @property
    def block_count(self) -> int:
        return len(self.blocks)


class AttemptLog(BaseModel):
    """Record of a rejection-sampling run for the base coloring."""
    n: int
    m: int
    seed: int
    max_attempts: int
    attempts: int = 0
    rejected_bad4_free: int = Field(
        0, description="Attempts rejected by a bad-4-free n-set")
    rejected_abc: int = Field(
        0, description="Attempts rejected by an A/B/C structure")
    accepted: bool = False
    note: str = ""


class ExpectationBounds(BaseModel):
    n: int
    m: int
    steiner_blocks: int
    log_abc_expectation: float
    log_good_set_bound: float
    abc_expectation: float
    good_set_bound: float


class CaseReport(BaseModel):
    """Colors of the six 5-subsets for one pattern and base assignment."""
    rule_set: str
    pattern: List[int]
    phi_assignment: Dict[str, Color] = Field(
        description="Base colors keyed by comma-joined ranks")
    edge_colors: List[Color]
    red_count: int
    case_label: str
    realization: List[int] = Field(
        default_factory=list,
        description="Six increasing vertices whose delta ranks are pattern")


class CaseStat(BaseModel):
    patterns: int = 0
    assignments: int = 0
    max_red: int = 0


class ClaimSummary(BaseModel):
    """Result of an exhaustive symbolic check of a six-point claim."""
    rule_set: str
    limit: int
    hypothesis_filter: bool = True
    patterns_checked: int
    assignments_checked: int
    global_max: int
    witness: Optional[CaseReport] = None
    per_case: Dict[str, CaseStat] = Field(default_factory=dict)
    holds: bool = True


class SixScanResult(BaseModel):
    """Maximum red count over the 6-subsets of a vertex set."""
    max: int = Field(description="Largest red count found")
    witness: Optional[List[int]] = None
    exact: bool = True
    subsets_scanned: int = 0
    seconds: float = 0.0
    threshold: int = 3
    exceeds_threshold: bool = False
    histogram: Dict[int, int] = Field(default_factory=dict)
    patterns_validated: int = 0


class CliqueResult(BaseModel):
    size: int
    clique: List[int]
    exact: bool
    nodes: int = 0
    seconds: float = 0.0


class PeakSearchState(BaseModel):
    """State of the dominant-peak rounds (0-based positions)."""
    s_set: List[int] = Field(default_factory=list, alias="S")
    t_set: List[int] = Field(default_factory=list, alias="T")
    sigma: int
    tau: int
    r: int = 0

    model_config = ConfigDict(populate_by_name=True)


class PeakResult(BaseModel):
    kind: Literal["peak", "chain"]
    index: Optional[int] = None
    chain: List[int] = Field(default_factory=list)
    direction: Optional[Literal["increasing", "decreasing"]] = None
    states: List[PeakSearchState] = Field(default_factory=list)


class Realization(BaseModel):
    """A 5-tuple of clique vertices realizing a claimed delta sequence."""
    key: List[int] = Field(description="Values (or a,b pair) realized")
    vertices: List[int]
    deltas: List[int]


class MonotonePayload(BaseModel):
    values: List[int] = Field(description="Delta values in chain order")
    direction: Literal["increasing", "decreasing"]
    realizations: List[Realization] = Field(default_factory=list)


class AbcPayload(BaseModel):
    a_set: List[int] = Field(alias="A")
    b_set: List[int] = Field(alias="B")
    c_set: List[int] = Field(alias="C")
    f: Dict[int, int]
    peak: int
    orientation: Literal["left", "right"] = Field(
        description="Side of the peak holding A")
    realizations: List[Realization] = Field(default_factory=list)

    model_config = ConfigDict(populate_by_name=True)


class ViolationCertificate(BaseModel):
    """Machine-checkable refutation of a purported blue clique."""
    schema_version: int = CERTIFICATE_SCHEMA_VERSION
    kind: Literal["MonotoneNSet", "AbcStructure", "NotABlueClique"]
    n: int
    bit_width: int
    rule_set: str = "Main64"
    clique: List[int] = Field(default_factory=list)
    red_tuple: Optional[List[int]] = None
    monotone: Optional[MonotonePayload] = None
    abc: Optional[AbcPayload] = None

    model_config = ConfigDict(populate_by_name=True)

    @model_validator(mode="after")
    def check_payload(self):
        needed = {"NotABlueClique": self.red_tuple,
                  "MonotoneNSet": self.monotone,
                  "AbcStructure": self.abc}[self.kind]
        if needed is None:
            raise ValueError(f"{self.kind} certificate is missing payload")
        return self

    def referenced_vertices(self) -> List[int]:
        result = list(self.red_tuple or [])
        payload = self.monotone or self.abc
        if payload is not None:
            for item in payload.realizations:
                result.extend(item.vertices)
        return result
