"""Command-line configuration."""

from __future__ import annotations

import os
from typing import Annotated

from pydantic import BaseModel, BeforeValidator, ConfigDict, Field, PlainSerializer, computed_field

from kleene_workbench import analysis, ids, simulation
from kleene_workbench.series import Alphabet

WORKERS_ENV = "KLEENE_WORKERS"
DEFAULT_BOUND = 4
DEFAULT_TRIALS = 100
MAX_SEED = 2**64


def get_default_workers() -> int:
    """Get the worker count set in the environment."""
    return int(os.getenv(WORKERS_ENV, "1"))


def _parse_semiring(value: object) -> object:
    return ids.SemiringId.parse(value) if isinstance(value, str) else value


def _parse_alphabet(value: object) -> object:
    if isinstance(value, str):
        return Alphabet.parse(value)
    if isinstance(value, (list, tuple)):
        return Alphabet(tuple(value))
    return value


type SemiringField = Annotated[ids.SemiringId, BeforeValidator(_parse_semiring), PlainSerializer(str)]
type AlphabetField = Annotated[Alphabet, BeforeValidator(_parse_alphabet), PlainSerializer(str)]


class CliConfig(BaseModel):
    """Settings shared by every command."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    semiring: SemiringField = Field(ids.NAT_INF, description="Semiring instance", examples=["nat-inf"])
    alphabet: AlphabetField = Field(Alphabet(("a", "b")), description="Letters", examples=["a,b"])
    bound: int = Field(DEFAULT_BOUND, ge=0, description="Truncation bound L on word length")
    seed: int = Field(0, ge=0, lt=MAX_SEED, description="Seed of every random choice")
    trials: int = Field(DEFAULT_TRIALS, ge=1, description="Randomized trials per suite")
    max_candidates: int = Field(simulation.DEFAULT_MAX_CANDIDATES, ge=1, description="Size limit of searches")
    workers: int = Field(default_factory=get_default_workers, ge=1, description="Worker threads")
    horizon: int | None = Field(None, ge=1, description="Iteration horizon of the omega check")
    divergence_bound: int = Field(analysis.DEFAULT_DIVERGENCE_BOUND, ge=1, description="Divergence test bound")
    json_output: bool = Field(default=False, description="Print reports as JSON")

    @computed_field  # type: ignore[prop-decorator]
    @property
    def effective_horizon(self) -> int:
        return analysis.default_horizon(self.bound) if self.horizon is None else self.horizon
