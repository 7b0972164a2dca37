"""Exception types shared across the package."""


class HilbertZetaError(Exception):
    """Base class for all errors raised by hilbertzeta."""


class DomainError(HilbertZetaError, ValueError):
    """An argument lies outside the domain of a function."""


class ParameterError(HilbertZetaError, ValueError):
    """A parameter set violates its invariants."""


class ConvergenceError(HilbertZetaError, ArithmeticError):
    """A numerical procedure failed to reach its requested tolerance."""

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class InsufficientDecayError(HilbertZetaError, ArithmeticError):
    """A Monte-Carlo estimate shows signs of infinite variance."""


class IntegrandError(HilbertZetaError, ValueError):
    """An integrand returned NaN or a value of the wrong shape."""


class InadmissibleError(HilbertZetaError, ValueError):
    """A test function violates the finiteness or positivity preconditions of a check."""
