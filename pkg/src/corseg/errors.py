"""Exception types shared across the package."""


class CorsegError(Exception):
    """Base class for all package-specific errors."""


class ValidationError(CorsegError):
    """An input value violates a documented invariant."""


class FormatError(CorsegError):
    """A file could not be parsed as the expected volume format."""


class ShapeError(CorsegError):
    """Array dimensions do not match the operation's contract."""


class ConfigError(CorsegError):
    """A configuration value is unknown or malformed."""


class NumericError(CorsegError):
    """Non-finite values where finite ones are required."""


class UndefinedMetricError(CorsegError):
    """A distance metric is undefined, e.g. for an empty surface."""


class DataError(CorsegError):
    """A dataset directory is missing required cases or files."""
