"""Exception types shared across the package."""


class RibetjacError(Exception):
    """Base class for every error raised by this package."""


class FieldMismatch(RibetjacError):
    """Operands belong to different finite fields."""


class DivisionByZero(RibetjacError, ZeroDivisionError):
    """Division (or negative power) of the zero element."""


class ZeroElement(RibetjacError):
    """Multiplicative order requested for zero."""


class FieldTooLarge(RibetjacError):
    """Field exceeds the configured desk-scale bound."""


class PointNotOnCurve(RibetjacError):
    """Coordinates do not satisfy the curve equation."""


class CurveMismatch(RibetjacError):
    """Objects live on different curves."""


class FullTorsionNotRational(RibetjacError):
    """The field does not contain all n-torsion points."""


class CharacteristicDividesN(RibetjacError):
    """n is divisible by the field characteristic."""


class ZeroEndomorphism(RibetjacError):
    """Operation undefined for the zero endomorphism."""


class PreimageNotRational(RibetjacError):
    """Some preimage under an isogeny lies in a field extension."""


class NotPrincipal(RibetjacError):
    """Divisor is not principal (nonzero degree or nonzero point sum)."""


class SupportCollision(RibetjacError):
    """A line in a program vanishes (or has a pole) at an evaluation point.

    Carries the offending step index when known; callers retry with a
    permuted reduction order.
    """

    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step


class SupportsNotDisjoint(RibetjacError):
    """Two divisors share a support point where disjointness is required."""


class NotTorsion(RibetjacError):
    """Point is not killed by the requested n."""


class NotInKernel(RibetjacError):
    """Jacobian class does not project to the identity."""


class QInBadLocus(RibetjacError):
    """Gluing point lies in the excluded locus (small order or ker(a^2-1))."""


class PathDisagreement(RibetjacError):
    """Two independent computations of the same value differ (a bug)."""


class NoWitnessFound(RibetjacError):
    """Search exhausted all candidate fibers without a witness."""


class DeskScaleExceeded(RibetjacError):
    """No field within the size bound satisfies the requirement."""


class ConfigError(RibetjacError):
    """Malformed experiment configuration."""
