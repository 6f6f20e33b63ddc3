"""Exception hierarchy shared across the toolkit."""


class StitKitError(Exception):
    """Base class for all toolkit errors."""


class InvalidBodyError(StitKitError, ValueError):
    """A polytope is empty, unbounded, or otherwise unusable."""


class SplitError(StitKitError, ValueError):
    """A cutting hyperplane does not cross the interior of the body."""


class MeasureError(StitKitError, ValueError):
    """A directional distribution is malformed or unsupported."""


class SamplingError(StitKitError, RuntimeError):
    """Random sampling failed (e.g. the rejection loop hit its cap)."""


class OutOfWindowError(StitKitError, ValueError):
    """A query point lies outside the simulation window."""


class DegenerateCellError(StitKitError, ValueError):
    """A tessellation cell has vanishing volume where volume is required."""


class DomainError(StitKitError, ValueError):
    """A special-function argument is outside its domain."""


class ConfigError(StitKitError, ValueError):
    """An experiment configuration failed validation."""


class DataFormatError(StitKitError, ValueError):
    """An input data file could not be parsed."""
