"""Exception types shared across the package."""


class CptError(Exception):
    """Base class for physics/numerics failures raised by this package."""


class ParameterError(ValueError):
    """Invalid physical parameters or an ill-posed request."""


class SingularSystemError(CptError):
    """The local Bloch system is numerically singular.

    Raised when the steady-state matrix has a condition estimate above
    1e14, which happens for the degenerate dark-manifold input (both
    fields zero with no ground-state decoherence) and when the fields are
    absorbed to numerical zero inside the medium.
    """

    def __init__(self, message, cond=None, xi=None, w=None):
        super().__init__(message)
        self.cond = cond
        self.xi = xi
        self.w = w


class NonConvergenceError(CptError):
    """Grid refinement failed, or the integration left the range where
    double precision can represent the result."""

    def __init__(self, message, xi=None):
        super().__init__(message)
        self.xi = xi


class FeatureUndefinedError(CptError):
    """Spectrum carries no squeezing at the center, so bandwidth and
    oscillation period are undefined."""
