"""Exception types raised by the toolkit.

Every error is a ``ValueError`` subclass so callers that only care about bad
input can catch one thing.
"""


class ZonoError(ValueError):
    pass


class NotPrimitive(ZonoError):
    pass


class SingularInput(ZonoError):
    pass


class BadIndexSet(ZonoError):
    pass


class BadParameters(ZonoError):
    pass


class ZeroDirection(ZonoError):
    pass


class LengthMismatch(ZonoError):
    pass


class DegenerateDimension(ZonoError):
    pass


class RankDeficient(ZonoError):
    pass


class DimensionMismatch(ZonoError):
    pass


class ZeroCoordinate(ZonoError):
    pass


class IrrationalDirection(ZonoError):
    pass


class NonPositiveVelocity(ZonoError):
    pass


class DegenerateVelocities(ZonoError):
    pass


class UnknownKind(ZonoError):
    pass


class CrossCheckFailure(RuntimeError):
    """Two independent computations of the same quantity disagreed."""
