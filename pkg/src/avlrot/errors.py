"""Exception types raised across the package."""


class AvlError(Exception):
    """Base class for every error this package raises on purpose."""


class DuplicateKeyError(AvlError):
    """Insert of a key that is already present."""


class KeyNotFoundError(AvlError, KeyError):
    """Delete or rotate aimed at a key that is not in the tree."""


class MissingChildError(AvlError):
    """Rotation that would hoist a child that does not exist."""


class EmptyTreeError(AvlError):
    """Operation that needs at least one node got an empty tree."""


class ParseError(AvlError):
    """Canonical text form could not be parsed.

    ``position`` is the 0-based character offset of the failure.
    """

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class ValidationError(AvlError):
    """Structure violates the tree invariants; carries the full report."""

    def __init__(self, report):
        super().__init__(str(report))
        self.report = report


class InvalidTargetError(AvlError):
    """Rebuild planning was asked for a target that fails validation."""

    def __init__(self, report):
        super().__init__(str(report))
        self.report = report


class OddRankError(AvlError):
    """Expensive-family generation only exists at even ranks."""


class NotExpensiveError(AvlError):
    """Operation requires membership in the expensive family."""


class BoundExceededError(AvlError):
    """Exhaustive shape enumeration was asked beyond its resource bound."""


class CapExceededError(AvlError):
    """Periodicity probe ran past its cap without finding a repetition."""


class VerificationError(AvlError):
    """Measured costs deviated from the exact expected values."""
