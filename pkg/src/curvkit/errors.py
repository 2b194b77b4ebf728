"""Exception types shared across the toolkit.

The CLI maps these onto its exit-status contract: invalid input and
configuration problems are usage errors (64), numeric failures are
internal errors (70).
"""


class CurvkitError(Exception):
    """Base class for all toolkit errors."""


class InvalidInputError(CurvkitError, ValueError):
    """Arguments violate a documented precondition."""


class CapabilityError(CurvkitError):
    """Operation is outside the configured capabilities (e.g. dimension ceiling)."""


class NumericError(CurvkitError, RuntimeError):
    """A numeric routine failed to converge or violated a residual bound."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class EmptySampleError(CurvkitError, RuntimeError):
    """A sampling loop produced no usable samples."""


class ConfigError(CurvkitError, ValueError):
    """Run configuration is inconsistent (e.g. CFL violation)."""


class DomainError(CurvkitError, ValueError):
    """Parameter outside the mathematical domain of a formula."""


class DegenerateSpectrumError(InvalidInputError):
    """Eigenvalue gaps below the configured threshold."""
