"""Exception hierarchy for sphereflow."""


class SphereFlowError(Exception):
    """Base class for all sphereflow errors."""


class AntipodalPair(SphereFlowError, ValueError):
    """The logarithm map is undefined for antipodal points."""


class InvalidCurve(SphereFlowError, ValueError):
    """Vertex data does not describe a valid closed spherical curve."""


class NonSimpleCurve(SphereFlowError):
    """A curve required to be simple self-intersects (or is degenerate)."""


class OffsetMakesNonSimple(NonSimpleCurve):
    pass


class RootNotBracketed(SphereFlowError):
    pass


class NonSimpleAfterStep(NonSimpleCurve):
    """A flow step produced a self-intersecting polygon."""


class DegenerateIntersection(SphereFlowError):
    """Two edges are coplanar within tolerance; intersections are not isolated."""


class DegenerateFit(SphereFlowError):
    """The curve has no preferred great-circle plane."""


class BandDegenerate(SphereFlowError):
    """A vertex sits on the boundary of the multiplicity band."""


class GenerationFailed(SphereFlowError):
    pass


class NotStarShaped(SphereFlowError):
    pass


class ChordTouchesCurve(SphereFlowError):
    pass
