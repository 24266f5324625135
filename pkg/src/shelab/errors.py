"""Exception types shared across the package."""


class ShelabError(Exception):
    """Base class for all package errors."""


class DomainError(ShelabError, ValueError):
    """An argument is outside the mathematical domain of an operation."""


class ConfigError(ShelabError, ValueError):
    """A run configuration violates a structural invariant."""


class MisuseError(ShelabError, ValueError):
    """An operation was called with coefficients or state it does not support."""


class QuadratureError(ShelabError, RuntimeError):
    """Numerical integration failed to reach the requested tolerance."""

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class SimulationDiverged(ShelabError, RuntimeError):
    """A field became non-finite during time stepping."""

    def __init__(self, step, message=None):
        super().__init__(message or f"non-finite field values detected at step {step}")
        self.step = step
