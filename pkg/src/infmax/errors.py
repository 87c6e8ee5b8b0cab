"""Exception types shared across the package."""


class InfmaxError(Exception):
    """Base class for all errors raised by this package."""


class GraphFormatError(InfmaxError):
    """Malformed edge list, annotated graph, label map, or seed-set file."""


class ConfigError(InfmaxError):
    """Bad experiment configuration (unknown key, unparsable value, ...)."""


class EnumerationCapError(InfmaxError):
    """Exact enumeration would exceed the configured branch cap."""
