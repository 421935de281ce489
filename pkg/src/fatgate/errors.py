"""Coded errors shared by every layer of the gateway.

The outward error vocabulary is a closed set of six codes; anything that
escapes a command handler is folded into ``Internal`` at the boundary.
"""

from __future__ import annotations

ERROR_CODES = frozenset(
    {"NotFound", "NoMatch", "Ambiguous", "BadIndex", "MalformedInput", "Internal"}
)


class ApiError(Exception):
    """Base for errors that surface as a coded API response."""

    code = "Internal"

    @property
    def message(self) -> str:
        return self.args[0] if self.args else ""


class NotFoundError(ApiError):
    code = "NotFound"


class NoMatchError(ApiError):
    code = "NoMatch"


class AmbiguousError(ApiError):
    code = "Ambiguous"


class BadIndexError(ApiError):
    code = "BadIndex"


class MalformedInputError(ApiError):
    code = "MalformedInput"


class NonFiniteNumberError(MalformedInputError):
    """NaN or infinity where a finite number is required."""


class InternalError(ApiError):
    code = "Internal"


class DuplicateNameError(InternalError):
    """Registration collision; reported as Internal through the API."""
