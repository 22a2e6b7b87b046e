"""Exception hierarchy shared by all trifit modules."""


class TrifitError(ValueError):
    """Base class for every error raised by this package."""


class ShapeInvalid(TrifitError):
    pass


class ConfigInvalid(TrifitError):
    """Raised when a line configuration breaks one of its strict inequalities.

    ``which`` names the failed inequality, e.g. ``"alpha < beta + gamma"``.
    """

    def __init__(self, message: str, which: str):
        super().__init__(message)
        self.which = which


class DegenerateConfig(TrifitError):
    pass


class ZeroVector(TrifitError):
    pass


class DegenerateTriangle(TrifitError):
    pass


class NumericalFailure(TrifitError):
    """Root refinement failed on a detected bracket.

    ``bracket`` holds the (theta_lo, theta_hi) cell that was being refined.
    """

    def __init__(self, message: str, bracket=None):
        super().__init__(message)
        self.bracket = bracket


class NotFound(TrifitError):
    pass


class DegenerateSolution(TrifitError):
    pass


class OrderUnachievable(TrifitError):
    pass


class PreconditionFailed(TrifitError):
    pass


class AlignmentFailed(TrifitError):
    pass
