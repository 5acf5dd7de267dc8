"""Exception hierarchy shared by every module."""


class FswError(Exception):
    """Base class for all library errors."""


class PresentationError(FswError, ValueError):
    pass


class NonConfluent(PresentationError):
    pass


class InhomogeneousRule(PresentationError):
    pass


class BadDegree(PresentationError):
    pass


class RingMismatch(FswError, ValueError):
    pass


class NoTopMonomial(FswError, ValueError):
    pass


class NonUnitConstantTerm(FswError, ArithmeticError):
    pass


class NonRationalCoefficients(FswError, ValueError):
    pass


class NonNilpotentArgument(FswError, ValueError):
    pass


class NonRationalRing(NonRationalCoefficients):
    pass


class RankTooSmall(FswError, ValueError):
    pass


class NegativeRank(FswError, ValueError):
    pass


class MissingPontryagin(FswError, ValueError):
    pass


class DegreeMismatch(FswError, ValueError):
    pass


class NegativeK(FswError, ValueError):
    pass


class NotMod2Ring(FswError, ValueError):
    pass


class PreconditionViolated(FswError, ValueError):
    pass


class WrongBPlusResidue(PreconditionViolated):
    pass


class ContextMismatch(FswError, ValueError):
    pass


class OddB1(FswError, ValueError):
    pass


class NonAntisymmetricM(FswError, ValueError):
    pass


class RouteDisagreement(FswError, AssertionError):
    """Two independent computations of the same quantity disagree."""


class BadRange(FswError, ValueError):
    pass


class ParseError(FswError, ValueError):
    pass


class UnknownGenerator(ParseError):
    pass


class BadSchema(FswError, ValueError):
    pass


class ScenarioFailure(FswError):
    pass


class BadCoefficient(FswError, ValueError):
    pass
