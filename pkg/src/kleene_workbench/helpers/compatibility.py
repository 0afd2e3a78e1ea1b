"""File format version helpers."""

from __future__ import annotations

import enum

import packaging.version

type VersionTuple = tuple[int, int]

SUPPORTED = (1, 0)
CURRENT_FORMAT_VERSION = "1.0"


class Compatibility(enum.Enum):
    """Compatibility levels."""

    CURRENT = enum.auto()
    OLDER_MINOR = enum.auto()
    NEWER_MINOR = enum.auto()
    UNSUPPORTED = enum.auto()


def get_version_tuple(text: str) -> VersionTuple:
    """Parse a ``format_version`` field.

    Raises:
        ValueError: If the version is malformed.
    """
    try:
        version = packaging.version.Version(text)
    except packaging.version.InvalidVersion as exc:
        msg = f"Malformed format version {text!r}"
        raise ValueError(msg) from exc
    return (version.major, version.minor)


def get_compatibility(text: str) -> Compatibility:
    """Get the compatibility level of a file format version."""
    version = get_version_tuple(text)
    if version[0] != SUPPORTED[0]:
        return Compatibility.UNSUPPORTED
    if version > SUPPORTED:
        return Compatibility.NEWER_MINOR
    if version < SUPPORTED:
        return Compatibility.OLDER_MINOR

    return Compatibility.CURRENT


def check_format_version(text: str) -> str:
    """Reject files written by an incompatible major version.

    Newer minor versions are read as the supported one; unknown keys still fail validation.
    """
    if get_compatibility(text) is Compatibility.UNSUPPORTED:
        msg = f"Format version {text} is not supported, expected {SUPPORTED[0]}.x"
        raise ValueError(msg)
    return text
