"""Exception hierarchy of the differential-algebra engine."""


class DiffAlgebraError(Exception):
    """Base class for all engine errors."""


class DimensionError(DiffAlgebraError):
    """Operands live in different jet spaces, a coordinate is out of range,
    or a pure-x operation received mixed-direction input."""


class NotExact(DiffAlgebraError):
    """A differential polynomial has no x-antiderivative."""


class UnsupportedPolynomial(DiffAlgebraError):
    """The operation is not defined for trig-extended polynomials."""


class UnknownFlow(DiffAlgebraError):
    """Reduction needs a flow the rewriting system does not define."""

    def __init__(self, index: int, message: str = ""):
        self.index = index
        super().__init__(message or f"no flow defined for time index {index}")


class MixedDirections(DiffAlgebraError):
    """A formal integral was given a representative that is not pure-x."""


class PotentialDependence(DiffAlgebraError):
    """The potential form of the Poisson bracket received input depending on v itself."""


class CacheFormatError(DiffAlgebraError):
    """A cache document is unreadable, of the wrong version, or fails its invariant check."""
