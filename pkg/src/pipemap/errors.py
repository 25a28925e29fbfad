"""Exception types shared across the package."""

from __future__ import annotations


class MappingInvalid(ValueError):
    """A mapping cannot be interpreted against its application or platform."""


class NonContiguousIntervals(MappingInvalid):
    """The intervals do not cover [1..n] as a gapless ascending partition."""


class IndexOutOfRange(MappingInvalid):
    """A stage or processor index falls outside its valid range."""


class DuplicateProcessor(MappingInvalid):
    """Two intervals are assigned to the same processor."""


class NoSplitPossible(RuntimeError):
    """An interval cannot be split: too few stages or no unused processor."""


class Infeasible(RuntimeError):
    """No mapping satisfying the requested bound was found.

    ``best`` carries the closest value reached: the lowest period achieved for
    a period bound, or the optimal latency when a latency bound is below it.
    """

    def __init__(self, best: float, message: str | None = None):
        self.best = float(best)
        super().__init__(message or f"bound unreachable; best achievable value is {self.best!r}")


class InstanceTooLarge(ValueError):
    """Exhaustive search refused: the instance exceeds the size guard."""


class NeverFails(RuntimeError):
    """The heuristic succeeded at every grid threshold; the failure point lies below the grid."""


class AlwaysFails(RuntimeError):
    """The heuristic failed even at the top of the grid; the grid ceiling is too low."""
