"""Exception types raised across the package."""


class WeakFanError(Exception):
    """Base class for all package errors."""


class InputShapeError(WeakFanError, ValueError):
    """Dimension mismatch or malformed input."""


class NoSolution(WeakFanError):
    """An inhomogeneous linear system is inconsistent."""


class NotNilpotentError(WeakFanError, ValueError):
    pass


class DomainError(WeakFanError, ValueError):
    """A flag violates a precondition (e.g. not in the compact dual)."""


class NotMHS(WeakFanError):
    """(W, F) is not a mixed Hodge structure.

    ``witness`` names the graded piece or bigrading index that failed.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness or {}


class NotCommuting(WeakFanError, ValueError):
    def __init__(self, i, j):
        super().__init__(f"generators {i} and {j} do not commute")
        self.pair = (i, j)


class NotInGq(WeakFanError, ValueError):
    def __init__(self, i):
        super().__init__(f"generator {i} does not preserve the polarization")
        self.index = i


class NotNilpotentGenerator(NotNilpotentError):
    def __init__(self, i):
        super().__init__(f"generator {i} is not nilpotent")
        self.index = i


class NotInGZ(WeakFanError, ValueError):
    """Matrix is not an integral automorphism of the polarized lattice."""


class UnsupportedDimension(WeakFanError, ValueError):
    pass


class RayNotInCone(WeakFanError, ValueError):
    pass


class MissingRay(WeakFanError, ValueError):
    pass


class CertificationError(WeakFanError):
    """A cone failed to certify against the flag it was expected to inherit."""

    def __init__(self, message, certificate=None):
        super().__init__(message)
        self.certificate = certificate
