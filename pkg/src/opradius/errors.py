"""Exception hierarchy shared by every module."""


class OpRadiusError(Exception):
    """Base class for all library errors."""


class NotHermitian(OpRadiusError, ValueError):
    pass


class NotPSD(OpRadiusError, ValueError):
    pass


class ConvergenceFailure(OpRadiusError, ArithmeticError):
    pass


class NoConvergence(ConvergenceFailure):
    """Adaptive quadrature exceeded its node budget."""


class DimensionMismatch(OpRadiusError, ValueError):
    pass


class InvalidTolerance(OpRadiusError, ValueError):
    pass


class InvalidMatrix(OpRadiusError, ValueError):
    """Input is not a finite square complex matrix."""


class WrongInputShape(OpRadiusError, ValueError):
    pass


class ParameterOutOfRange(OpRadiusError, ValueError):
    pass


class NotApplicable(OpRadiusError, ValueError):
    pass


class InvalidSpec(OpRadiusError, ValueError):
    pass


class IOFailure(OpRadiusError, OSError):
    """A report or matrix file could not be written or read."""
