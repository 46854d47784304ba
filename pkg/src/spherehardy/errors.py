"""Exception types shared across the package."""


class DomainError(ValueError):
    """Argument outside the domain where a function is defined or finite."""


class ModeError(ValueError):
    """Operation requires an axisymmetric (mode 0) function."""


class NoConvergence(ArithmeticError):
    """Adaptive quadrature or an iterative solver stopped above tolerance.

    The partial result, when one exists, is attached as ``result``.
    """

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class DivergentNorm(ArithmeticError):
    """An integral that should be finite for H^1 functions diverges."""


class NotPositiveDefinite(ArithmeticError):
    def __init__(self, message, pivot=None):
        super().__init__(message)
        self.pivot = pivot


class ConditioningError(ArithmeticError):
    """Basis rejected because its Gram matrix is too ill-conditioned."""

    def __init__(self, message, pivot_ratio=None):
        super().__init__(message)
        self.pivot_ratio = pivot_ratio
