"""Exception hierarchy shared across the package."""


class QbdError(Exception):
    """Base class for all package errors."""


class DomainError(QbdError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class PoleError(DomainError):
    """A q-series or q-product hit a zero factor where a ratio is required."""


class ConvergenceError(QbdError, ArithmeticError):
    """A truncated series failed to meet its tolerance within the term cap."""


class CapabilityError(QbdError, ValueError):
    """The request exceeds a deliberate implementation limit."""


class ConfigError(QbdError, ValueError):
    """Invalid experiment or CLI configuration."""
