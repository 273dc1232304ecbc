"""Error hierarchy shared by the library and the command line."""

from typing import Optional


class KellerToolError(ValueError):
    """Base class for every error raised by the toolkit.

    Each subclass carries the process exit code the CLI reports for it, so
    scripts can tell "the tool failed" apart from "the identity failed".
    """

    exit_code = 3

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


class DimensionMismatchError(KellerToolError):
    """Operands live in different ambient dimensions or an index is out of range."""

    exit_code = 3


class MapParseError(KellerToolError):
    """A map file could not be parsed into a valid map."""

    exit_code = 2

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        if line is not None:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)
        self.line = line
        self.column = column


class PreconditionError(KellerToolError):
    """An operation was called outside its precondition."""

    exit_code = 3


class GuardExceededError(KellerToolError):
    """A safety guard on enumeration size or truncation degree was exceeded."""

    exit_code = 4


class InternalInconsistencyError(KellerToolError):
    """Exact arithmetic produced a result that cannot happen; signals a bug."""

    exit_code = 5


class ConditionalCheckError(KellerToolError):
    """A check that presumes the Jacobian hypothesis was run on a non-Keller map."""

    exit_code = 6
