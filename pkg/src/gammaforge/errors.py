"""Exception types shared across the package."""


class GammaForgeError(Exception):
    pass


class DomainError(GammaForgeError, ArithmeticError):
    """Argument outside the mathematical domain (caller bug, not data)."""


class PoleError(DomainError):
    pass


class NonConvergenceError(GammaForgeError):
    pass


class InsufficientAccuracyError(GammaForgeError):
    """An asymptotic route cannot reach the requested accuracy.

    ``estimate`` holds the best achievable error estimate when known.
    """

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate


class DegenerateFitError(GammaForgeError):
    pass
