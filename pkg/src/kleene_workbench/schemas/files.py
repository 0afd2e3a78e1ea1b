"""Pydantic models of the JSON files read and written by the command-line front end.

Scalars are JSON integers, or the string ``"inf"`` on the extended naturals.
"""

from __future__ import annotations

from typing import Annotated, Literal, Self

from pydantic import AfterValidator, ConfigDict, Field, field_validator, model_validator

from kleene_workbench import enums, ids, semiring
from kleene_workbench.helpers import compatibility
from kleene_workbench.schemas.reports import BaseModel

type JsonScalar = Annotated[int, Field(ge=0)] | Literal["inf"]


def to_scalar(x: JsonScalar) -> semiring.Scalar:
    return semiring.INF if x == semiring.INF.value else int(x)


def from_scalar(x: semiring.Scalar) -> JsonScalar:
    return "inf" if x is semiring.INF else x


def _parse_semiring(tag: str) -> str:
    try:
        ids.SemiringId.parse(tag)
    except ids.InvalidSemiringError as exc:
        raise ValueError(str(exc)) from exc
    return tag


type SemiringTag = Annotated[str, AfterValidator(_parse_semiring)]


class _FileModel(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid", validate_by_name=True, validate_by_alias=True, serialize_by_alias=True)

    semiring: SemiringTag = Field(description="Semiring tag", examples=["boolean", "nat-inf", "chain(3)"])

    @property
    def instance(self) -> ids.SemiringId:
        return ids.SemiringId.parse(self.semiring)

    def _check_scalars(self, values: list[JsonScalar], where: str) -> None:
        sr = semiring.resolve(self.instance)
        for x in values:
            if not sr.contains(to_scalar(x)):
                msg = f"{x!r} in {where} is not an element of {self.semiring}"
                raise ValueError(msg)


class AutomatonFile(_FileModel):
    """Weighted automaton (α, {M_a}, β)."""

    format_version: str = Field(compatibility.CURRENT_FORMAT_VERSION, description="File format version", examples=["1.0"])
    name: str | None = Field(None, description="Automaton name")
    alphabet: list[str] = Field(min_length=1, description="Letters in order", examples=[["a", "b"]])
    dim: int = Field(ge=1, description="Number of states")
    alpha: list[JsonScalar] = Field(description="Initial row vector")
    beta: list[JsonScalar] = Field(description="Final column vector")
    transitions: dict[str, list[list[JsonScalar]]] = Field(alias="M", description="Transition matrix of every letter")

    @field_validator("format_version")
    @classmethod
    def _check_version(cls, value: str) -> str:
        return compatibility.check_format_version(value)

    @model_validator(mode="after")
    def _check_shape(self) -> Self:
        if len(self.alpha) != self.dim or len(self.beta) != self.dim:
            msg = f"alpha and beta must have {self.dim} entries"
            raise ValueError(msg)
        if set(self.transitions) != set(self.alphabet) or len(set(self.alphabet)) != len(self.alphabet):
            msg = "M must have exactly one matrix per distinct alphabet letter"
            raise ValueError(msg)
        for letter, rows in self.transitions.items():
            if len(rows) != self.dim or any(len(row) != self.dim for row in rows):
                msg = f"M[{letter!r}] must be {self.dim}x{self.dim}"
                raise ValueError(msg)
            self._check_scalars([x for row in rows for x in row], f"M[{letter!r}]")
        self._check_scalars(self.alpha, "alpha")
        self._check_scalars(self.beta, "beta")
        return self


class WitnessFile(_FileModel):
    """Simulation matrix X."""

    matrix: list[list[JsonScalar]] = Field(min_length=1, description="Rows of X")

    @model_validator(mode="after")
    def _check_shape(self) -> Self:
        width = len(self.matrix[0])
        if width == 0 or any(len(row) != width for row in self.matrix):
            msg = "matrix rows must be nonempty and of equal length"
            raise ValueError(msg)
        self._check_scalars([x for row in self.matrix for x in row], "matrix")
        return self

    @property
    def scalars(self) -> list[list[semiring.Scalar]]:
        return [[to_scalar(x) for x in row] for row in self.matrix]


class DfaFile(_FileModel):
    """Level-set DFA: states in discovery order, state 0 initial."""

    alphabet: list[str]
    states: list[list[JsonScalar]] = Field(description="Reachable vectors αM_w")
    initial: int = 0
    transitions: dict[str, list[int]] = Field(description="Target state index of every state, per letter")
    outputs: list[JsonScalar] = Field(description="Coefficient vβ of every state")


class ChainLinkFile(BaseModel):
    """Next automaton of a chain and the matrix joining it to the previous one."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    automaton: AutomatonFile
    matrix: list[list[JsonScalar]] = Field(min_length=1)
    orientation: enums.Orientation = Field(
        enums.Orientation.forward,
        description="forward: X maps the previous automaton to this one; backward: the reverse",
    )


class ChainFile(_FileModel):
    """Chain of simulations starting at ``start``."""

    start: AutomatonFile
    links: list[ChainLinkFile] = Field(default_factory=list)

    @model_validator(mode="after")
    def _check_instances(self) -> Self:
        for automaton in (self.start, *(link.automaton for link in self.links)):
            if automaton.instance != self.instance:
                msg = f"automaton over {automaton.semiring} in a chain over {self.semiring}"
                raise ValueError(msg)
        for index, link in enumerate(self.links):
            self._check_scalars([x for row in link.matrix for x in row], f"links[{index}].matrix")
        return self
