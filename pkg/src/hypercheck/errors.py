"""Exception hierarchy shared by all modules."""


class HypercheckError(Exception):
    """Base class for every error raised by this package."""


class DomainError(HypercheckError, ValueError):
    """An argument is outside the mathematical domain of the operation."""


class ShapeError(HypercheckError, ValueError):
    """Two objects live on incompatible spaces."""


class UnsupportedError(HypercheckError):
    """The operation exists but is not available for these arguments."""


class ResourceError(HypercheckError):
    """A desk-scale cap (table size, quadrature grid) would be exceeded."""


class HypothesisError(HypercheckError):
    """A checker was invoked on inputs violating a hard hypothesis."""


class ConfigError(HypercheckError):
    """A suite configuration does not validate."""


class ParseError(HypercheckError):
    """A file could not be parsed; message carries position info."""
