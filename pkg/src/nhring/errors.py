"""Exception hierarchy shared across the package.

Config/validation problems and numerical failures are kept on separate
branches so the CLI can map them to distinct exit codes.
"""


class NhringError(Exception):
    """Base class for all package-specific errors."""


class InvalidParameterError(NhringError, ValueError):
    """An argument violates an operation's precondition."""


class ConfigError(NhringError, ValueError):
    """A run configuration is malformed or inconsistent."""


class NumericalError(NhringError, RuntimeError):
    """Base class for failures of the numerical machinery."""


class SolverFailure(NumericalError):
    """Eigensolver did not converge or violated its residual contract."""


class BoundaryMassExceeded(NumericalError):
    """Probability reaching the edge of the mode window invalidates truncation."""


class StepUnderflow(NumericalError):
    """Adaptive integrator collapsed its step size (stiffness failure)."""


class BracketError(NhringError, ValueError):
    """A bisection bracket does not straddle the sought transition."""
