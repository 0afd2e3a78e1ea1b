from __future__ import annotations

__all__ = ["BadParameterError", "ParseError", "UnsupportedError"]


class BadParameterError(Exception):
    """Bad parameter error."""


class UnsupportedError(Exception):
    """The operation is not available for the given semiring instance."""


class ParseError(Exception):
    """Expression or file could not be parsed."""
