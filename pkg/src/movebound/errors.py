"""Exception types raised by movebound."""


class MoveboundError(Exception):
    """Base class for all library errors."""


class NonconvergenceError(MoveboundError):
    """A series did not reach its tail bound within the term cap."""


class RootNotBracketedError(MoveboundError):
    """The search window holds fewer sign changes than requested."""


class QuadratureError(MoveboundError):
    """An adaptive quadrature could not reach the requested tolerance."""


class GrowthOverflowError(MoveboundError):
    """An ODE solution exceeded the growth cap inside the requested domain."""


class StepFailureError(MoveboundError):
    """The adaptive step-size controller stalled."""


class DomainExceededError(MoveboundError):
    """A convolution window reaches outside the domain of the convolved function."""


class DegenerateFamilyError(MoveboundError):
    """Boundary family with d1**2 + 4*c2 == 0."""


class ComplexBoundaryError(MoveboundError):
    """The boundary formula would need the square root of a negative number."""


class NewtonDivergenceError(MoveboundError):
    """Zero tracing lost the root.

    ``last_good_t`` is the last time at which a root was found and
    ``partial`` holds the (t, x, f') rows traced up to that point.
    """

    def __init__(self, message, last_good_t=None, partial=None):
        super().__init__(message)
        self.last_good_t = last_good_t
        self.partial = partial if partial is not None else []


class SingularSystemError(MoveboundError):
    """The implicit finite-difference system could not be solved."""
