"""Exception types raised across the toolkit."""


class StabkitError(Exception):
    """Base class; the CLI maps these to exit code 1."""


class DimensionError(StabkitError, ValueError):
    pass


class ResourceLimitError(StabkitError):
    """Raised when a dense or enumeration guard would be exceeded."""


class CodeConstructionError(StabkitError, ValueError):
    pass


class UnsupportedError(StabkitError):
    """Operation not available for this input (e.g. non-Clifford on a frame engine)."""


class ThresholdExceededError(StabkitError, ValueError):
    pass


class ParseError(StabkitError, ValueError):
    pass
