"""Exception taxonomy shared across the package.

Every error the engine raises deliberately derives from PmcadError so the CLI
can map failures to exit codes without string matching.
"""


class PmcadError(Exception):
    """Base class for all deliberate failures."""


class UsageError(PmcadError):
    """Caller violated a documented precondition (bad input, bad order, ...)."""


class ResourceLimitError(PmcadError):
    """A configured cell or time budget was exhausted mid-computation."""

    def __init__(self, message: str, cells: int | None = None, seconds: float | None = None):
        super().__init__(message)
        self.cells = cells
        self.seconds = seconds


class WellOrientednessError(PmcadError):
    """A projection factor vanished identically on a positive-dimensional cell.

    The projection operator used here is only valid for well-oriented inputs;
    callers are expected to change the variable order or reformulate.
    """


class NullificationError(PmcadError):
    """A polynomial vanished identically on a lifting fiber.

    Raised by the real-algebra layer; the lifting layer decides whether the
    situation is benign (zero-dimensional base) or fatal (WellOrientednessError).
    """


class PathQueryError(UsageError):
    """Start or goal of a path query is invalid (false cell, outside region)."""
