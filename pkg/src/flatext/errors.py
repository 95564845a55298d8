"""Exception types shared across the package."""


class FlatextError(Exception):
    """Base class for all package errors."""


class ParseError(FlatextError, ValueError):
    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at offset {position})"
        super().__init__(message)
        self.position = position


class DomainError(FlatextError, ArithmeticError):
    """Division by a vanishing jet, or sqrt of a non-positive one."""


class DegenerateError(FlatextError):
    """Surface or boundary fails to be regular at parameter ``t``."""

    def __init__(self, message, t=None):
        if t is not None:
            message = f"{message} at t={t!r}"
        super().__init__(message)
        self.t = t


class GaussDegenerateError(DegenerateError):
    """The unit normal along the boundary is stationary."""


class UndefinedTorsion(FlatextError):
    """Curvature of the space curve vanishes, so torsion is undefined."""


class NotFiniteType(FlatextError):
    """A curve fails to have resolved type within the available jet order."""

    def __init__(self, message, t=None):
        if t is not None:
            message = f"{message} at t={t!r}"
        super().__init__(message)
        self.t = t


class AtInfinityError(NotFiniteType):
    """The dual curve point lies on the plane at infinity."""


class NonIsolatedRoot(FlatextError):
    def __init__(self, quantity, interval):
        a, b = interval
        super().__init__(f"{quantity} vanishes on [{a!r}, {b!r}]")
        self.quantity = quantity
        self.interval = (float(a), float(b))


class AmbiguousLandmark(FlatextError):
    """A root of D sits next to a root of k2 but no certificate holds."""

    def __init__(self, ts, landmarks=()):
        super().__init__("ambiguous swallowtail/osculating landmark near t=" +
                         ", ".join(repr(float(t)) for t in ts))
        self.ts = tuple(float(t) for t in ts)
        self.landmarks = list(landmarks)


class OsculatingTangentInRange(FlatextError):
    def __init__(self, ts):
        super().__init__("osculating-tangent point inside extension range at t=" +
                         ", ".join(repr(float(t)) for t in ts))
        self.ts = tuple(float(t) for t in ts)


class RulingTangentToBoundary(FlatextError):
    def __init__(self, t):
        super().__init__(f"ruling tangent to boundary at t={float(t)!r}")
        self.t = float(t)


class ChartError(FlatextError):
    """Normal is orthogonal to the third axis; the affine chart is undefined."""
