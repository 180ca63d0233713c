"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class UqBetheError(Exception):
    """Base class for every error raised by the package."""


class PoleError(UqBetheError, ZeroDivisionError):
    """A rational function was evaluated on one of its pole loci."""


class RelationError(UqBetheError):
    """A generator or module self-check found a violated relation."""


class SingularVectorError(UqBetheError):
    """No basis vector satisfies the weight-singular conditions."""


class AmbiguityError(SingularVectorError):
    """Several basis vectors satisfy the weight-singular conditions."""

    def __init__(self, message: str, candidates: list[int]):
        super().__init__(message)
        self.candidates = candidates


class PivotError(UqBetheError):
    """A diagonal Gauss coordinate is not invertible at the sampled point."""


class TruncationError(UqBetheError):
    """A computation reached a level above the truncation of a Verma module."""


class MismatchError(UqBetheError):
    """Modules combined in a tensor product are incompatible."""


class AdmissibilityError(UqBetheError):
    """A split of a segment collection violates the admissibility conditions."""


class LengthError(UqBetheError, ValueError):
    """Paired argument lists have different lengths."""


class ZeroLambdaError(UqBetheError, ZeroDivisionError):
    """A weight series vanished where it has to be inverted."""


class VariantError(UqBetheError):
    """The requested construction is not defined for this R-matrix variant."""
