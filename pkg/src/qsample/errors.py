"""Exception hierarchy shared across the package."""


class QSampleError(Exception):
    """Base class for every error raised by this package."""


class InvalidParameterError(QSampleError, ValueError):
    pass


class NumericFailureError(QSampleError, ArithmeticError):
    pass


class ReversibilityError(QSampleError, ValueError):
    """Detailed balance (or a real spectrum) does not hold within tolerance."""


class GapTooSmallError(QSampleError, ValueError):
    pass


class StructuralError(QSampleError):
    """The busy-subspace construction produced an inconsistent rank or invariance."""


class SizeGuardError(QSampleError, ValueError):
    pass


class GapMismatchError(QSampleError, ValueError):
    """A filter was synthesized for a larger gap than the walk actually has."""


class ConfigurationError(QSampleError, ValueError):
    pass


class PreconditionError(QSampleError, ValueError):
    pass


class CertificationError(QSampleError):
    """A measured quantity exceeded the bound it is supposed to satisfy."""


class InvalidStateError(QSampleError, ValueError):
    pass
