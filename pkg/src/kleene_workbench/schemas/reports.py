"""Pydantic models of the reports returned by checkers and CLI commands."""

from __future__ import annotations

from pydantic import BaseModel as PydanticBaseModel
from pydantic import ConfigDict, Field, computed_field

from kleene_workbench import enums  # ruff: ignore[typing-only-first-party-import]


class BaseModel(PydanticBaseModel):
    model_config = ConfigDict(frozen=True)


class IdentityCheck(BaseModel):
    """One identity evaluated on concrete arguments."""

    name: str = Field(description="Identity name", examples=["sum-star"])
    lhs: str
    rhs: str
    holds: bool


class StarAxiomsReport(BaseModel):
    """Fixed point, dual fixed point, sum-star and product-star on one pair."""

    semiring: str
    a: str
    b: str
    checks: list[IdentityCheck]

    @computed_field  # type: ignore[prop-decorator]
    @property
    def passed(self) -> bool:
        return all(check.holds for check in self.checks)


class LpfpReport(BaseModel):
    """Least pre-fixed point rule (or its dual) and the equational variant on one triple."""

    semiring: str
    a: str
    b: str
    x: str
    dual: bool
    premise: bool
    conclusion: bool
    equational_premise: bool
    equational_conclusion: bool

    @computed_field  # type: ignore[prop-decorator]
    @property
    def vacuous(self) -> bool:
        return not self.premise

    @computed_field  # type: ignore[prop-decorator]
    @property
    def passed(self) -> bool:
        return (not self.premise or self.conclusion) and (not self.equational_premise or self.equational_conclusion)


class OrderReport(BaseModel):
    """Canonical order against the sum order on one pair."""

    semiring: str
    a: str
    b: str
    leq: bool
    witness: str | None = Field(None, description="Some r with a + r = b")
    witness_verified: bool

    @computed_field  # type: ignore[prop-decorator]
    @property
    def coincide(self) -> bool:
        return self.leq == self.witness_verified


class AtomisticReport(BaseModel):
    """Outcome of the bounded common-refinement search; 1-based block indices."""

    semiring: str
    a: list[str]
    b: list[str]
    max_k: int
    found: bool
    c: list[str] = Field(default_factory=list)
    parts_a: list[list[int]] = Field(default_factory=list)
    parts_b: list[list[int]] = Field(default_factory=list)


class FunctorialReport(BaseModel):
    """Whether AC = CB carries over to A*C = CB*."""

    semiring: str
    premise: bool
    conclusion: bool | None = Field(None, description="Only evaluated when the premise holds")
    shape: enums.MatrixShapeKind
    shapes: list[enums.MatrixShapeKind]
    predicted_by: list[str] = Field(description="Functorial-star results whose hypotheses are met")

    @computed_field  # type: ignore[prop-decorator]
    @property
    def passed(self) -> bool:
        return not self.premise or bool(self.conclusion)


class SeriesEqualityReport(BaseModel):
    """Two truncated series compared coefficientwise."""

    name: str
    bound: int
    lhs: dict[str, str]
    rhs: dict[str, str]

    @computed_field  # type: ignore[prop-decorator]
    @property
    def holds(self) -> bool:
        return self.lhs == self.rhs


class EquivalenceReport(BaseModel):
    """Truncated behaviours compared up to a bound."""

    semiring: str
    bound: int
    equivalent: bool
    word: str | None = Field(None, description="First differing word in length-lexicographic order")
    left: str | None = None
    right: str | None = None


class SimulationReport(BaseModel):
    """The three conditions of a simulation A → B by X."""

    source: str
    target: str
    initial: bool = Field(description="αX = γ")
    transitions: dict[str, bool] = Field(description="M_a X = X N_a per letter")
    final: bool = Field(description="β = Xδ")
    shape: enums.MatrixShapeKind

    @computed_field  # type: ignore[prop-decorator]
    @property
    def valid(self) -> bool:
        return self.initial and self.final and all(self.transitions.values())


class ChainReport(BaseModel):
    """Verification of a chain of simulations."""

    links: list[SimulationReport]
    broken_link: int | None = Field(None, description="Index of the first invalid link")
    strong: bool
    bound: int
    behaviors_equal: bool

    @computed_field  # type: ignore[prop-decorator]
    @property
    def valid(self) -> bool:
        return self.broken_link is None


class OmegaEntry(BaseModel):
    word: str
    value: str
    certificate: enums.Certificate


class OmegaReport(BaseModel):
    """Closed-form omega power certified against its iterates."""

    horizon: int
    bound: int
    monotone: bool
    dominated: bool
    entries: list[OmegaEntry]

    @computed_field  # type: ignore[prop-decorator]
    @property
    def passed(self) -> bool:
        return (
            self.monotone
            and self.dominated
            and all(entry.certificate is not enums.Certificate.failed for entry in self.entries)
        )


class SuiteResult(BaseModel):
    """Pass count of one invariant suite."""

    name: str
    trials: int
    passed: int
    skipped: int = 0
    reproducer: dict[str, object] | None = Field(None, description="Inputs of the first failing trial")

    @computed_field  # type: ignore[prop-decorator]
    @property
    def ok(self) -> bool:
        return self.reproducer is None


class AxiomsReport(BaseModel):
    semiring: str
    seed: int
    trials: int
    suites: list[SuiteResult]

    @computed_field  # type: ignore[prop-decorator]
    @property
    def ok(self) -> bool:
        return all(suite.ok for suite in self.suites)


class ProbeReport(BaseModel):
    """Equivalent pairs connected by one- or two-step simulations."""

    samples: int
    one_step: int
    two_step: int
    unconnected: int
    skipped: int


class EvalReport(BaseModel):
    """Behaviour of an expression, computed by evaluation and by its compiled automaton."""

    expression: str
    semiring: str
    bound: int
    coefficients: dict[str, str] = Field(description="Nonzero coefficients by word, ε as eps")
    compiled_agrees: bool


class SearchReport(BaseModel):
    """Every simulation found between two automata."""

    source: str
    target: str
    shape: enums.MatrixShapeKind | None = None
    witnesses: list[list[list[str]]]
    strong: list[bool]

    @computed_field  # type: ignore[prop-decorator]
    @property
    def found(self) -> int:
        return len(self.witnesses)


class LevelSet(BaseModel):
    value: str
    words: list[str] = Field(description="Words of the level set up to the truncation bound")


class DecomposeReport(BaseModel):
    """Level sets of an image-finite behaviour."""

    semiring: str
    bound: int
    states: int = Field(description="States of the level-set DFA")
    level_sets: list[LevelSet]
    reconstructs: bool
