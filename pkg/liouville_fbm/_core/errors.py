class LiouvilleError(Exception):
    """Base class for every error raised on purpose by liouville_fbm."""


class ConfigError(LiouvilleError):
    """Experiment or settings file could not be parsed or validated."""


class GridMismatchError(LiouvilleError, ValueError):
    """Two objects that must share a TimeGrid do not."""


class DimensionMismatchError(LiouvilleError, ValueError):
    """Operator dimensions are incompatible."""


class IllConditionedError(LiouvilleError):
    """A triangular system has a pivot too small to be trusted."""


class NotPositiveSemidefiniteError(LiouvilleError):
    """Covariance could not be factorized within the jitter tolerance."""


class DivergentNormError(LiouvilleError):
    """The requested norm is infinite for the given orders."""


class ThresholdViolationError(LiouvilleError):
    """The spectral series behind an estimate diverges."""


class MemoryBudgetError(LiouvilleError):
    """A simulation would exceed the configured memory budget."""
