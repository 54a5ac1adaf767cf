"""Exception hierarchy shared by every module."""


class ReconError(Exception):
    """Base class for all library errors."""


class DimensionError(ReconError, ValueError):
    """Words of different length or alphabet were combined."""


class EmptySupportError(ReconError, ValueError):
    """Two words that were required to differ are equal."""


class WordIndexError(ReconError, IndexError):
    """A 1-based position lies outside the word."""


class SpecError(ReconError, ValueError):
    """A ball specification violates t + s < n."""


class DomainError(ReconError, ValueError):
    """Arguments fall outside the domain of a formula or construction."""


class IdenticalWordsError(DomainError):
    """Distance 0: the intersection is the full ball, not a structured case."""


class DisjointBallsError(DomainError):
    """Distance >= 5: two radius-2 substitution balls never meet."""


class GuardrailError(ReconError, RuntimeError):
    """An enumeration would exceed the configured size limits."""


class CapacityError(ReconError, ValueError):
    """More distinct reads were requested than the error ball holds."""

    def __init__(self, message, ball_size):
        super().__init__(message)
        self.ball_size = ball_size


class LoadError(ReconError, ValueError):
    """A code file could not be parsed."""
