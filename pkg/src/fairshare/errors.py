"""Exception hierarchy.

Every error raised by the library derives from ``FairDivisionError`` so
callers can catch the whole family at once.
"""


class FairDivisionError(ValueError):
    pass


class NegativeValue(FairDivisionError):
    pass


class ProbabilitiesDoNotSumToOne(FairDivisionError):
    pass


class ZeroExpectedValue(FairDivisionError):
    def __init__(self, agent):
        super().__init__(f"agent {agent} has zero expected value")
        self.agent = agent


class InvalidProblem(FairDivisionError):
    """Shape errors: no states, fewer than two agents, ragged rows."""


class InvalidTheta(FairDivisionError):
    pass


class RuleKindMismatch(FairDivisionError):
    pass


class Infeasible(FairDivisionError):
    pass


class Unbounded(FairDivisionError):
    pass


class IterationLimit(FairDivisionError):
    pass


class DegenerateDenominator(FairDivisionError):
    pass


class InvalidM(FairDivisionError):
    pass


class QuadratureNonConvergence(FairDivisionError):
    pass


class DomainError(FairDivisionError):
    pass


class NoFiniteT(FairDivisionError):
    pass


class HarmonicMomentInfinite(FairDivisionError):
    pass


class ZeroDeviation(FairDivisionError):
    pass
