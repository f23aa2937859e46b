class DegencolorError(Exception):
    """Base class for errors raised by this package."""


class ParameterError(DegencolorError, ValueError):
    """An argument is outside the range an operation accepts."""


class ResourceLimitError(DegencolorError):
    """A search or simulation ran past its configured budget."""


class AllRunsAborted(DegencolorError):
    """Every guess of the streaming ladder aborted or failed to decode."""

    def __init__(self, runs):
        super().__init__(f"all {len(runs)} guess runs aborted")
        self.runs = runs


class QueryBudgetExceeded(DegencolorError):
    """The second query stage would exceed its worst-case cap."""


class StreamFormatError(DegencolorError, ValueError):
    """A stream or edge-list file could not be parsed."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
