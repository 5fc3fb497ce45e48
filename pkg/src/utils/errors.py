"""
Error hierarchy for hyperrel.
Every library failure derives from HyperrelError so the CLI can map it to an exit code.
"""

from typing import Optional


class HyperrelError(Exception):
    """Base class for all hyperrel errors."""


class MissingEmptyOrFull(HyperrelError):
    """A candidate topology lacks the empty set or the whole node set."""


class NotClosedUnderUnion(HyperrelError):
    """A candidate topology is not closed under pairwise union."""

    def __init__(self, first: int, second: int):
        self.first = first
        self.second = second
        super().__init__(f"opens {first:#b} and {second:#b} have a union that is not open")


class NotClosedUnderIntersection(HyperrelError):
    """A candidate topology is not closed under pairwise intersection."""

    def __init__(self, first: int, second: int):
        self.first = first
        self.second = second
        super().__init__(
            f"opens {first:#b} and {second:#b} have an intersection that is not open"
        )


class DimensionMismatch(HyperrelError):
    """Relations, topologies or tuples of different sizes were combined."""


class GuardExceeded(HyperrelError):
    """An exhaustive computation was asked for beyond its size guard."""


class ParseError(HyperrelError):
    """Malformed text input; carries the 1-based line number when known."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        self.message = message
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


class NotPrimitive(HyperrelError):
    """No power of the adjacency matrix is all-positive."""


class PreconditionError(HyperrelError):
    """A documented precondition of an operation does not hold."""
