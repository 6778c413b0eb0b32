"""Exceptions shared across the package."""

from __future__ import annotations


class TruncationError(RuntimeError):
    """A computation needed cells outside the enumerated scope.

    Raised instead of silently treating missing cells as absent: a flow or
    boundary computed against a too-small scope would be wrong, not partial.
    """

    def __init__(self, message: str, *, dim: int | None = None,
                 length: int | None = None) -> None:
        super().__init__(message)
        self.dim = dim
        self.length = length


class StabilizationError(RuntimeError):
    """Flow iteration hit its cap without reaching a fixed point."""

    def __init__(self, message: str, *, iterations: int,
                 orbit_tail: tuple = ()) -> None:
        super().__init__(message)
        self.iterations = iterations
        self.orbit_tail = orbit_tail


class SelfCheckError(RuntimeError):
    """Two independent routes to the same value disagreed."""


class ChainParseError(ValueError):
    """A chain expression string could not be parsed."""
