"""Exception hierarchy shared by every module."""

from __future__ import annotations


class XWitnessError(Exception):
    """Base class for all library errors."""


class InvalidBipartitionError(XWitnessError, ValueError):
    """Supports overlap, a subset is trivial, or parties are out of range."""


class IndexNotInB0Error(XWitnessError, IndexError):
    """An index that should begin with 0 does not."""


class ValidationError(XWitnessError, ValueError):
    """Malformed numeric input (non-finite values, complex diagonals, shape)."""


class PreconditionError(XWitnessError, ValueError):
    """An operation was called outside its domain.

    ``index`` names the offending slot when there is one.
    """

    def __init__(self, message: str, index: str | None = None):
        super().__init__(message)
        self.index = index


class NotDecomposableError(PreconditionError):
    def __init__(self, message: str, margin: float):
        super().__init__(message)
        self.margin = margin


class NotFullyBiBlockPositiveError(PreconditionError):
    def __init__(self, message: str, margin: float, pair: tuple[str, str] | None = None):
        super().__init__(message)
        self.margin = margin
        self.pair = pair


class NotOptimalError(PreconditionError):
    pass


class RegularizationRequiredError(PreconditionError):
    """A zero diagonal entry blocks a closed-form construction; mix with epsilon*I first."""


class ConvergenceError(XWitnessError, RuntimeError):
    pass
