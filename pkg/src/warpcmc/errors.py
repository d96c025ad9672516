"""Exception hierarchy shared across the package."""


class WarpcmcError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(WarpcmcError, ValueError):
    """An evaluation point lies outside the mathematical domain of an operation."""


class InputError(WarpcmcError, ValueError):
    """Malformed or degenerate input data (bad grids, bad config, bad files)."""


class QuadratureError(WarpcmcError, RuntimeError):
    """Adaptive quadrature failed to reach the requested tolerance."""

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class NoSphereError(WarpcmcError, RuntimeError):
    """No turning radius exists: the mean curvature is too small for this warping."""


class NotAdmissibleError(WarpcmcError, RuntimeError):
    """The requested (H, d) pair does not yield an admissible rotational profile."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report
