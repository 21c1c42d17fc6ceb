"""Exception hierarchy.

Every domain error carries a short ``code`` (the class name) which the CLI
serializes as ``{"error": code, "message": ...}``.
"""


class LatrefError(ValueError):
    """Base class for all domain errors raised by latref."""

    @property
    def code(self) -> str:
        return type(self).__name__

    def to_json(self) -> dict:
        out = {"error": self.code}
        if self.args:
            out["message"] = str(self.args[0])
        return out


# lattice construction and arithmetic
class NotSymmetric(LatrefError):
    pass


class OddDiagonal(LatrefError):
    pass


class Degenerate(LatrefError):
    pass


class DimensionMismatch(LatrefError):
    pass


class ZeroTwist(LatrefError):
    pass


class NoSplitting(LatrefError):
    pass


class MissingSplitting(NoSplitting):
    pass


class VectorNotInSigma(LatrefError):
    pass


# isometries and generators
class NotAnIsometry(LatrefError):
    pass


class LatticeMismatch(LatrefError):
    pass


class IsotropicVector(LatrefError):
    pass


class NotIntegral(LatrefError):
    pass


class BadConjugator(LatrefError):
    pass


class MalformedWord(LatrefError):
    pass


# local invariants
class ZeroInput(LatrefError):
    pass


class HypothesisUnverifiable(LatrefError):
    pass


class NotTwiceEven(LatrefError):
    pass


# decomposition
class Exhausted(LatrefError):
    pass


class MalformedResidual(LatrefError):
    pass


class SigmaNotHandled(LatrefError):
    pass


# K3 constructions
class SquareDiscriminant(LatrefError):
    pass


class NoSolutionFound(LatrefError):
    pass


class DiscriminantMismatch(LatrefError):
    pass


class ParityFailure(LatrefError):
    pass


class WrongRank(LatrefError):
    pass


class WrongSignature(LatrefError):
    pass


class FixtureFailed(LatrefError):
    pass


class UnknownFixture(LatrefError):
    pass


class MalformedInput(LatrefError):
    """Unparseable or schema-violating JSON input."""
