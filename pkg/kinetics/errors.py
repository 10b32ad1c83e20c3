"""
Exception types for the kinetics and verification packages.
"""


class VmlkError(Exception):
    """Base class for every error raised by vmlk"""


class GridError(VmlkError, ValueError):
    """Invalid grid parameters or mismatched grids"""


class ParameterError(VmlkError, ValueError):
    """Physical parameter outside its admissible range"""


class PositivityError(VmlkError, ValueError):
    """A distribution that must be strictly positive is not"""


class DegenerateDensityError(VmlkError, ValueError):
    """Density too small to normalize moments"""


class SingularityError(VmlkError, ValueError):
    """Kernel evaluated at the excluded point z = 0"""


class NeutralityError(VmlkError):
    """Net charge on the torus: Gauss's law has no periodic solution"""


class StepRejectedError(VmlkError):
    """A time step produced a nonpositive distribution"""

    def __init__(self, message, dt):
        super().__init__(message)
        self.dt = dt


class KillingPreconditionError(VmlkError):
    """Symmetrized Jacobian is above tolerance, constancy cannot be asserted"""


class RankDeficientError(VmlkError):
    """Normal system of the log-quadratic fit is singular"""


class ConfigError(VmlkError, ValueError):
    """Malformed or invalid scenario configuration"""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
