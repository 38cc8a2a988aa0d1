"""Exception types shared across the package."""


class EigenbondError(Exception):
    """Base class for all package-specific errors."""


class ValidationError(EigenbondError):
    """Bad user input: parameters, schedules, or configuration."""


class UnsupportedModelError(EigenbondError):
    """An operation was requested for a model that does not support it."""


class ConvergenceError(EigenbondError):
    """A truncated series failed to satisfy its stopping rule within bounds."""


class BracketError(EigenbondError):
    """Root bracketing or the single-crossing sign scan failed.

    Carries ``decision_index`` when raised inside the backward recursion so
    the failing decision date can be reported.
    """

    def __init__(self, message, decision_index=None):
        super().__init__(message)
        self.decision_index = decision_index


class DensityTruncationError(EigenbondError):
    """Transition-density expansion cannot reach the requested tail accuracy."""
