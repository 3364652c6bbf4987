"""Exception hierarchy shared across the package."""


class CPDRError(ValueError):
    """Base class for every error raised by :mod:`cpdr`."""


class InputError(CPDRError):
    """Malformed or out-of-contract input data."""


class NumericalError(CPDRError):
    """A numerical stage could not produce a valid result."""


class DegenerateSampleError(NumericalError):
    pass


class SingularScatterError(NumericalError):
    pass


class ConvergenceError(NumericalError):
    """Fixed-point iteration hit ``max_iter`` before reaching ``tol``.

    The last iterate is kept on the exception so callers can inspect or
    reuse it.
    """

    def __init__(self, message, sigma=None, mu=None, residual=None, iterations=None):
        super().__init__(message)
        self.sigma = sigma
        self.mu = mu
        self.residual = residual
        self.iterations = iterations
