class TessellaError(Exception):
    pass


class ResourceExhausted(TessellaError):
    """A coset enumeration or subgroup search ran past its size limit."""


class InvalidParameters(TessellaError, ValueError):
    pass


class GeometryMismatch(TessellaError):
    pass


class NoConvergence(TessellaError):
    pass


class ToleranceCollision(TessellaError):
    pass


class NotAReflection(TessellaError, ValueError):
    pass


class PaletteTooSmall(TessellaError, ValueError):
    pass
