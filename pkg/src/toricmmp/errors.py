"""Exception hierarchy.

Every failure raised by the toolkit derives from :class:`ToricError`, so
callers can catch one type.  The CLI maps these onto exit codes.
"""


class ToricError(Exception):
    """Base class for all toolkit errors."""


class ZeroVector(ToricError, ValueError):
    pass


class UnboundedRegion(ToricError, ValueError):
    pass


class NotStronglyConvex(ToricError, ValueError):
    pass


class NotAFan(ToricError, ValueError):
    def __init__(self, message, cones=None):
        super().__init__(message)
        self.cones = cones


class NonPrimitiveRay(ToricError, ValueError):
    pass


class EmptyFan(ToricError, ValueError):
    pass


class NonIntegralCharacter(ToricError, ValueError):
    pass


class NotQCartier(ToricError, ValueError):
    pass


class NotProper(ToricError, ValueError):
    pass


class IncompatibleCone(ToricError, ValueError):
    def __init__(self, message, cone=None):
        super().__init__(message)
        self.cone = cone


class NonIntegralMap(ToricError, ValueError):
    pass


class NotBirational(ToricError, ValueError):
    pass


class ReducibleFiber(ToricError, ValueError):
    def __init__(self, message, components=()):
        super().__init__(message)
        self.components = list(components)


class BoundaryWall(ToricError, ValueError):
    pass


class NoContractedCurves(ToricError, ValueError):
    pass


class MergeNotConvex(ToricError, ValueError):
    def __init__(self, message, union=None):
        super().__init__(message)
        self.union = union


class NotAFanAfterMerge(ToricError, ValueError):
    pass


class EmptySectionPolyhedron(ToricError, ValueError):
    pass


class NonBirationalUnsupported(ToricError, NotImplementedError):
    pass


class NotSmall(ToricError, ValueError):
    pass


class MinusDNotAmple(ToricError, ValueError):
    pass


class NotExceptional(ToricError, ValueError):
    pass


class NotIrreducible(ToricError, ValueError):
    pass


class NoNegativeRay(ToricError, RuntimeError):
    pass


class TerminationError(ToricError, RuntimeError):
    pass


class PushforwardMismatch(ToricError, ValueError):
    pass


class NotQGorenstein(ToricError, ValueError):
    pass


class RayOfFan(ToricError, ValueError):
    pass


class OutsideSupport(ToricError, ValueError):
    pass


class WrongDimension(ToricError, ValueError):
    pass


class InvalidWeights(ToricError, ValueError):
    pass


class NotComplete(ToricError, ValueError):
    pass


class CompletionFailed(ToricError, RuntimeError):
    pass


class CannotPreserveProperty(ToricError, RuntimeError):
    def __init__(self, message, invariant=None, cone=None):
        super().__init__(message)
        self.invariant = invariant
        self.cone = cone


class UnknownScenario(ToricError, KeyError):
    pass


class Infeasible(ToricError, ValueError):
    pass
