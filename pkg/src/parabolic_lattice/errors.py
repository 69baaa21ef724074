"""Exception hierarchy.

Every error carries a stable ``code`` string (the class name) which the CLI
reports as ``{"error": code, "detail": ...}``.
"""


class LatticeError(Exception):
    """Base class for all domain errors raised by this package."""

    @property
    def code(self) -> str:
        return type(self).__name__


class NonSymmetric(LatticeError):
    pass


class Degenerate(LatticeError):
    pass


class DimensionMismatch(LatticeError):
    pass


class ZeroVector(LatticeError):
    pass


class DependentVectors(LatticeError):
    pass


class RankMismatch(LatticeError):
    pass


class InternalConsistencyError(LatticeError):
    """An exact identity failed. Always a bug, never bad input."""


class ElementNotInGroup(LatticeError):
    pass


class BudgetExceeded(LatticeError):
    pass


class NotIsotropic(LatticeError):
    pass


class NotPrimitive(LatticeError):
    pass


class UnknownName(LatticeError):
    pass


class BadParameter(LatticeError):
    pass


class NoAnchorPoint(LatticeError):
    pass


class NotAFujikiForm(LatticeError):
    pass


class DegenerateKahler(LatticeError):
    pass


class ZeroLine(LatticeError):
    pass


class NotPositive(LatticeError):
    pass


class WrongSignature(LatticeError):
    pass


class BadInputs(LatticeError):
    pass


class LemmaViolation(LatticeError):
    pass


class DegenerateSublattice(LatticeError):
    pass


class InvalidGenerator(LatticeError):
    pass


class InvariantMergeViolation(LatticeError):
    pass


class InputParseError(LatticeError):
    pass
