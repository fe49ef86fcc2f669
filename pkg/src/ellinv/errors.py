"""Exception types raised by the library."""


class EllipticInversionError(Exception):
    """Base class for all library errors."""


class CenterSingular(EllipticInversionError):
    """A point is too close to the center of inversion for the requested construction."""


class OffLine(EllipticInversionError):
    pass


class DegenerateQuad(EllipticInversionError):
    pass


class MidpointSingular(EllipticInversionError):
    """The harmonic conjugate of the midpoint is the point at infinity."""


class UnsupportedDegree(EllipticInversionError):
    pass


class ZeroCurve(EllipticInversionError):
    pass


class SingularAtOrigin(EllipticInversionError):
    pass


class EmptyResult(EllipticInversionError):
    pass


class InvalidSpec(EllipticInversionError):
    pass


class IndexOutOfRange(EllipticInversionError):
    pass


class PreconditionError(EllipticInversionError, ValueError):
    """Inputs violate a documented precondition (e.g. lines that should be parallel are not)."""
