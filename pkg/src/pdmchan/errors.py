"""Exception types shared across the package."""


class PdmchanError(Exception):
    """Base class for all package errors."""


class DomainError(PdmchanError, ValueError):
    """An argument lies outside the domain of the function."""


class ConfigurationError(PdmchanError, ValueError):
    """Invalid model, grid or run configuration."""


class ConvergenceError(PdmchanError, RuntimeError):
    """An iterative procedure hit its iteration cap before reaching tolerance."""


class TruncationWarning(UserWarning):
    """A truncated domain may be too short for the requested states."""
