from __future__ import annotations

import re
from typing import NamedTuple, override

from kleene_workbench import enums, exceptions

CHAIN_PATTERN = re.compile(r"^chain\((?P<levels>[0-9]+)\)$")


class InvalidSemiringError(exceptions.BadParameterError):
    """Invalid semiring tag error."""

    def __init__(self, *, tag: str, reason: str | None = None) -> None:
        msg = f"'{tag}' is not a valid semiring"
        if reason:
            msg = f"{msg}: {reason}"
        super().__init__(msg)


class SemiringId(NamedTuple):
    """Semiring ID.

    Chain lattices carry their number of levels, every other instance has ``levels=None``.
    """

    kind: enums.SemiringKind
    levels: int | None = None

    @override
    def __str__(self) -> str:
        if self.kind is enums.SemiringKind.chain:
            return f"chain({self.levels})"
        return self.kind.value

    @classmethod
    def from_params(cls, *, kind: str, levels: int | None = None) -> SemiringId:
        """Create a semiring ID from parameters.

        Args:
            kind: Semiring kind tag.
            levels: Number of levels, for chain lattices only.

        Returns:
            Semiring ID.
        """
        try:
            kind_member = enums.SemiringKind(kind)
        except ValueError:
            raise InvalidSemiringError(tag=kind) from None

        if kind_member is enums.SemiringKind.chain:
            if levels is None or levels < 2:  # ruff: ignore[magic-value-comparison]
                raise InvalidSemiringError(tag=kind, reason="chain lattices need at least 2 levels")
            return cls(kind=kind_member, levels=levels)

        if levels is not None:
            raise InvalidSemiringError(tag=kind, reason="only chain lattices take a number of levels")
        return cls(kind=kind_member)

    @classmethod
    def parse(cls, tag: str) -> SemiringId:
        """Parse a tag such as ``nat-inf`` or ``chain(3)``."""
        tag = tag.strip()
        if match := CHAIN_PATTERN.match(tag):
            return cls.from_params(kind=enums.SemiringKind.chain, levels=int(match.group("levels")))
        if tag == enums.SemiringKind.chain:
            raise InvalidSemiringError(tag=tag, reason="write chain(n) with n >= 2")
        return cls.from_params(kind=tag)


BOOLEAN = SemiringId(enums.SemiringKind.boolean)
NAT_INF = SemiringId(enums.SemiringKind.nat_inf)
TROPICAL = SemiringId(enums.SemiringKind.tropical_nat_inf)


def chain(levels: int) -> SemiringId:
    """Chain lattice with the given number of levels."""
    return SemiringId.from_params(kind=enums.SemiringKind.chain, levels=levels)
