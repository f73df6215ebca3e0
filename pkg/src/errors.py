"""
Error hierarchy shared by the services and the command line surface.

Each category carries the exit code the CLI reports for it.
"""

from typing import Optional


class LineGeometryError(Exception):
    """Base class for every error raised by the toolkit."""
    exit_code = 1


class InputValidationError(LineGeometryError):
    """Raised when input data violates an axiom or a format."""
    exit_code = 1


class HypothesisError(LineGeometryError):
    """Raised when a map fails the adjacency-preservation hypothesis."""
    exit_code = 2


class DimensionError(LineGeometryError):
    """Raised when a space is too small for the requested operation."""
    exit_code = 3


class BudgetError(LineGeometryError):
    """Raised when a size cap or a search budget is exceeded."""
    exit_code = 4


class ConsistencyAlarm(LineGeometryError):
    """Raised when an internal state contradicts the theory. Never expected."""
    exit_code = 5


class UnknownPointError(InputValidationError):
    """Raised when a point identifier is out of range."""

    def __init__(self, point: int, point_count: Optional[int] = None):
        self.point = point
        bound = f" (space has {point_count} points)" if point_count is not None else ""
        super().__init__(f"Unknown point {point}{bound}")


class UnknownLineError(InputValidationError):
    """Raised when a line identifier is out of range."""

    def __init__(self, line: int, line_count: Optional[int] = None):
        self.line = line
        bound = f" (space has {line_count} lines)" if line_count is not None else ""
        super().__init__(f"Unknown line {line}{bound}")


class PreconditionViolatedError(InputValidationError):
    """Raised when an operation is called outside its precondition."""
    pass


class SearchBudgetExceededError(BudgetError):
    """Raised when an exact search visits more nodes than allowed."""

    def __init__(self, limit: int, what: str = "search"):
        self.limit = limit
        super().__init__(f"{what} exceeded node budget of {limit}")


class SizeCapExceededError(BudgetError):
    """Raised when an input or output exceeds a configured size cap."""

    def __init__(self, what: str, size: int, cap: int):
        self.size = size
        self.cap = cap
        super().__init__(f"{what} {size} exceeds cap {cap}")
