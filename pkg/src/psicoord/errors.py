"""Exception hierarchy shared by all modules."""


class PsiCoordError(Exception):
    """Base class for every domain error raised by this package."""


class MalformedInput(PsiCoordError, ValueError):
    """Input file is syntactically unusable."""


# triangulation
class GluingError(PsiCoordError, ValueError):
    pass


class DuplicateSlot(GluingError):
    pass


class UnmatchedSlot(GluingError):
    pass


class Disconnected(GluingError):
    pass


class OddHexagonCount(GluingError):
    pass


class InvalidEdgePath(PsiCoordError, ValueError):
    pass


# hexagon
class NonPositiveLength(PsiCoordError, ValueError):
    pass


class NonFiniteInput(PsiCoordError, ValueError):
    pass


class InvalidRTriple(PsiCoordError, ValueError):
    pass


class UnknownScenario(PsiCoordError, ValueError):
    pass


# psi
class InfiniteArgumentWithNonnegativeLambda(PsiCoordError, ValueError):
    pass


class UnknownEdge(PsiCoordError, KeyError):
    pass


class NumericalInconsistency(PsiCoordError, ArithmeticError):
    pass


# polytope
class DimensionMismatch(PsiCoordError, ValueError):
    pass


class HRepParseError(PsiCoordError, ValueError):
    pass


# solver
class NotInPolytope(PsiCoordError):
    pass


class NoConvergence(PsiCoordError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class SingularJacobian(PsiCoordError):
    pass


class JacobianMismatch(PsiCoordError):
    pass
