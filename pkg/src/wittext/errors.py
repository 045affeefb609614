"""Exception hierarchy shared by every module of the package."""


class WittError(Exception):
    """Base class for all errors raised by wittext."""


class FieldMismatch(WittError):
    pass


class DivisionByZero(WittError, ZeroDivisionError):
    pass


class NotASquare(WittError):
    pass


class InfiniteField(WittError):
    pass


class NoSolution(WittError):
    pass


class DimensionMismatch(WittError):
    pass


class AmbientMismatch(WittError):
    pass


class NotWellDefined(WittError):
    pass


class OutOfDomain(WittError):
    pass


class DisagreeOnIntersection(WittError):
    pass


class NotOrthogonal(WittError):
    pass


class Overlap(WittError):
    pass


class NotAnIsometry(WittError):
    pass


class SingularSpace(WittError):
    pass


class BackendUnsupported(WittError):
    """The requested witness cannot be manufactured over this field."""


class NotExtendable(WittError):
    pass


class NotIsometricAmbients(WittError):
    pass


class HypothesisViolated(WittError):
    """A precondition of a construction fails; ``clause`` names which one."""

    def __init__(self, clause, detail=""):
        self.clause = clause
        self.detail = detail
        super().__init__(f"{clause}: {detail}" if detail else clause)


class ConditionsNotMet(HypothesisViolated):
    pass


class SplitHypothesisViolated(HypothesisViolated):
    pass


class NotDirectSum(WittError):
    pass


class NotCompatible(WittError):
    pass


class NotSelfDual(WittError):
    pass


class FlagsNotIsometric(WittError):
    pass


class NotTotallyIsotropic(WittError):
    pass


class SearchSpaceTooLarge(WittError):
    pass


class PairingIncomplete(WittError):
    pass
