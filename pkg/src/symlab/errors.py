"""Exception types shared across the package."""


class SymlabError(Exception):
    """Base class for all symlab errors."""


class EmptyInputError(SymlabError):
    """No points were supplied where at least one is required."""


class DimensionMismatchError(SymlabError):
    """Operands live in different ambient dimensions."""


class NotUnitError(SymlabError):
    """A direction vector is not unit length (tolerance 1e-12)."""


class UnsupportedDimensionError(SymlabError):
    """The requested dimension is outside what this operation supports."""


class VertexBudgetExceededError(SymlabError):
    """A hull grew past the configured vertex cap and pruning was disabled."""


class GridTooCoarseError(SymlabError):
    """The sphere grid cannot resolve the requested harmonic band."""


class RejectionStallError(SymlabError):
    """Rejection sampling acceptance rate collapsed (misdeclared bound)."""


class AlphaTooLargeError(SymlabError):
    """Density bound alpha makes the theoretical rate bound nonpositive."""


class TooFewPointsError(SymlabError):
    """Not enough usable samples above the numerical floor for a fit."""


class AllAtFloorError(SymlabError):
    """Every sample sits at the numerical floor; nothing to fit."""


class RateTooAggressiveError(SymlabError):
    """The threshold rate r^n is never eventually satisfied by most seeds."""


class TrajectoryAbortedError(SymlabError):
    """An iterated run failed mid-flight; carries the failing step index."""

    def __init__(self, step, cause):
        super().__init__(f"trajectory aborted at step {step}: {cause}")
        self.step = step
        self.cause = cause


class ConfigError(SymlabError):
    """An experiment configuration failed validation."""
