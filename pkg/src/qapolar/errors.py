"""Exception hierarchy shared by all modules."""


class QApolarError(Exception):
    """Base class for every error raised by this package."""


class AllCoefficientsZero(QApolarError, ValueError):
    pass


class NonConvergence(QApolarError, ArithmeticError):
    """Root iteration ran out of budget; carries the best iterate."""

    def __init__(self, message, best=None, residual=None):
        super().__init__(message)
        self.best = best
        self.residual = residual


class IndexOutOfRange(QApolarError, IndexError):
    pass


class BinomOverflow(QApolarError, OverflowError):
    pass


class AmbientExceeded(QApolarError, ValueError):
    pass


class DimensionMismatch(QApolarError, ValueError):
    pass


class NonMonicMap(QApolarError, ValueError):
    pass


class UnsupportedShape(QApolarError, ValueError):
    pass


class NotHermitian(QApolarError, ValueError):
    pass


class DegenerateBoundary(QApolarError, ValueError):
    pass


class InvalidDomain(QApolarError, ValueError):
    pass


class OddDegreeMap(QApolarError, ValueError):
    pass


class SingularT(QApolarError, ArithmeticError):
    pass


class EmptyRegion(QApolarError, ValueError):
    pass


class HypothesisFailed(QApolarError, ValueError):
    pass
