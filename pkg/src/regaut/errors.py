"""Exception hierarchy shared by all regaut modules."""

from __future__ import annotations


class RegautError(Exception):
    """Base class for all library errors."""


class InputError(RegautError, ValueError):
    """Invalid input: dimension mismatch, malformed data, failed validation."""


class PolyParseError(InputError):
    """Polynomial or map file text that cannot be parsed."""


class NotRegularError(InputError):
    """Map pair failed the regularity requirement; carries a witness factor."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class UndecidedError(RegautError):
    """A verdict could not be reached within the declared scope or budget."""


class ResourceLimitError(RegautError):
    """Iteration, bit-size, or term budget exhausted.

    ``partial`` carries whatever result was computed before the budget ran
    out (a point, a GreenValue, ...), ``last_index`` the last completed step.
    """

    def __init__(self, message: str, partial=None, last_index: int | None = None):
        super().__init__(message)
        self.partial = partial
        self.last_index = last_index
