from __future__ import annotations

import enum
from typing import override


class _HyphenatedEnum(enum.StrEnum):
    """Base class for hyphenated enums."""

    @staticmethod
    @override
    def _generate_next_value_(name: str, start: int, count: int, last_values: list[str]) -> str:
        return name.lower().replace("_", "-")


class SemiringKind(_HyphenatedEnum):
    """Registered semiring instances."""

    boolean = enum.auto()
    nat_inf = enum.auto()
    tropical_nat_inf = enum.auto()
    chain = enum.auto()


class MatrixShapeKind(enum.StrEnum):
    """Matrix shapes, from most to least specific."""

    invertible_diagonal = enum.auto()
    diagonal = enum.auto()
    functional = enum.auto()
    dual_functional = enum.auto()
    general = enum.auto()


class Orientation(enum.StrEnum):
    """Direction of one link in a simulation chain."""

    forward = enum.auto()
    backward = enum.auto()


class TargetKind(enum.StrEnum):
    """Algebras a rational expression can be evaluated in."""

    series = enum.auto()
    matrix = enum.auto()


class Certificate(_HyphenatedEnum):
    """How an omega-power coefficient was certified by iteration."""

    attained = enum.auto()
    reached_infinity = enum.auto()
    bound_crossed = enum.auto()
    strict_growth = enum.auto()
    failed = enum.auto()
