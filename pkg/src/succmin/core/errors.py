"""Exception hierarchy for succmin."""

import numpy as np


class SuccminError(Exception):
    """Base class for all succmin errors."""


class InvalidMatrix(SuccminError, ValueError):
    """Matrix has a bad shape, non-finite entries or breaks a type invariant."""


class NonSquare(InvalidMatrix):
    """A square matrix was required."""


class DimensionMismatch(InvalidMatrix):
    """Operands have incompatible dimensions."""


class NotPositiveDefinite(SuccminError, np.linalg.LinAlgError):
    """Cholesky hit a pivot at or below the pivot tolerance."""


class RankDeficient(InvalidMatrix):
    """A full column rank matrix was required."""


class InvalidDelta(SuccminError, ValueError):
    """LLL parameter outside (1/4, 1]."""


class TransformOverflow(SuccminError, OverflowError):
    """A unimodular transform entry left the 64-bit range."""


class DimensionTooLarge(SuccminError, ValueError):
    """Exact enumeration refused for this dimension."""


class RadiusOverflow(SuccminError):
    """Enumeration exceeded its node budget."""


class EnumerationIncomplete(SuccminError):
    """Enumeration did not yield a full-rank nondecreasing set of minima."""


class IndexOutOfRange(SuccminError, IndexError):
    """Successive-minimum index outside 1..n."""


class NegativeInput(SuccminError, ValueError):
    """A norm-valued input was negative."""


class PreconditionViolated(SuccminError, ValueError):
    """A bound or monotonicity precondition (e.g. G1 - G2 SPD) does not hold."""


class CapacityTooSmall(SuccminError):
    """No finite d meets the fronthaul threshold."""

    def __init__(self, message: str, threshold: float):
        super().__init__(message)
        self.threshold = threshold


class GenerationFailed(SuccminError):
    """Random instance generation did not produce a valid instance."""


class ConfigError(SuccminError, ValueError):
    """Configuration value outside its documented range."""


class ParseError(SuccminError, ValueError):
    """Input file could not be parsed."""
