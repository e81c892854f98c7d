"""Exception types shared by the tree_subcone modules."""


class SubconeError(Exception):
    """Base class for every error raised by tree_subcone."""


class InvariantError(SubconeError, ValueError):
    """Raised when a value violates the invariants of its type."""

    def __init__(self, message: str, position: int | None = None) -> None:
        self.position = position
        if position is not None:
            message = f"[{position}]: {message}"
        super().__init__(message)


class OutOfDomainError(SubconeError, ValueError):
    """Raised when an argument falls outside the domain of an operation."""


class TreeMetricError(SubconeError, ValueError):
    """Raised when a distance matrix is not a tree metric."""

    def __init__(self, message: str, indices: tuple[int, ...] | None = None) -> None:
        self.indices = indices
        super().__init__(message)


class OutsideDiskError(SubconeError, ValueError):
    """Raised when a point lies on or outside the unit circle."""


class OverflowRegimeError(SubconeError, ArithmeticError):
    """Raised when the direct hyperbolic path would overflow native floats."""


class ScheduleExhaustedError(SubconeError):
    """Raised when an epsilon schedule ends before an error bound is met."""

    def __init__(self, message: str, smallest_eps: float) -> None:
        self.smallest_eps = smallest_eps
        super().__init__(f"{message} (smallest eps tried: {smallest_eps:.17g})")


class InputFormatError(SubconeError, ValueError):
    """Raised by parsers; the message names the source and the position."""
