"""Exception hierarchy for framekit.

Every error derives from :class:`FramekitError`, which is a ``ValueError`` so
callers that only care about bad input can catch the builtin.
"""


class FramekitError(ValueError):
    """Base class for all framekit errors."""


class NonFinite(FramekitError):
    pass


class NotHermitian(FramekitError):
    pass


class NotPSD(FramekitError):
    pass


class DimensionMismatch(FramekitError):
    pass


class EmptyInput(FramekitError):
    pass


class NullSpaceViolation(FramekitError):
    """The quotient ``[A/B]`` is ill-defined because N(B) is not inside N(A)."""


class BlockNotInSubspace(FramekitError):
    pass


class NotAFrame(FramekitError):
    pass


class NotAFusionFrame(FramekitError):
    pass


class NotAKFrame(FramekitError):
    pass


class NotKFusion(FramekitError):
    pass


class ZeroOperator(FramekitError):
    pass


class ZeroOperatorInProduct(FramekitError):
    pass


class BadPartition(FramekitError):
    pass


class MemberCountMismatch(FramekitError):
    pass


class WeightMismatch(FramekitError):
    pass


class NonCommutingProjections(FramekitError):
    pass


class CommutationHypothesisFailed(FramekitError):
    pass


class ParseError(FramekitError):
    pass


class HypothesisViolated(FramekitError):
    """A construction's hypothesis failed; ``theorem`` names the demo id."""

    def __init__(self, theorem, message):
        self.theorem = theorem
        super().__init__(f"[{theorem}] {message}")


class UnknownTheorem(FramekitError):
    pass
