"""Exception hierarchy shared by all modules."""


class AmoebaError(Exception):
    """Base class for errors raised by this package."""


class InputError(AmoebaError, ValueError):
    """Bad arguments: wrong dimension, malformed files, violated preconditions."""


class DomainError(InputError):
    """Evaluation at a point outside the domain (zero coordinate with a negative power)."""


class AdmissibilityError(InputError):
    """Mean energy outside the closed convex hull of the spectrum."""


class EmptyEnsembleError(InputError):
    """No admissible occupation collection exists for the requested (N, E)."""


class TruncationError(AmoebaError):
    """A requested coefficient is not determined inside the truncation box."""


class NumericalError(AmoebaError, ArithmeticError):
    """An iterative method failed. ``residual`` holds the best residual seen."""

    def __init__(self, message, residual=None, trace=None):
        super().__init__(message)
        self.residual = residual
        self.trace = list(trace) if trace is not None else []


class DegenerateFiberError(NumericalError):
    """The fiber polynomial vanishes identically."""


class OrderError(NumericalError):
    """Root counts differ across fibers: the point is inside or too near the amoeba."""


class SingularPointError(NumericalError):
    """All logarithmic partial derivatives vanish: a singular point of the hypersurface."""


class NoConvergenceError(NumericalError):
    """Newton-type iteration did not reach the requested residual."""


class BoundaryError(NumericalError):
    """Convex solver iterates escaped to infinity: mean energy on the hull boundary."""


class DegenerateSaddleError(NumericalError):
    """The phase Hessian is singular (non-Morse saddle)."""
