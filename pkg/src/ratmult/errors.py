"""Exception hierarchy.

Every domain failure derives from :class:`DynamicsError`; the CLI maps these to
exit status 1 and reports ``type(exc).__name__`` as the error tag.
"""


class DynamicsError(Exception):
    """Base class for domain errors."""


class ResultantZero(DynamicsError):
    """Numerator and denominator share a root (degenerate map)."""


class NotACycle(DynamicsError):
    pass


class SingularMobius(DynamicsError):
    pass


class MultiplierOne(DynamicsError):
    pass


class DegenerateFixedPoints(DynamicsError):
    pass


class Overflow(DynamicsError, OverflowError):
    """n**m - 1 left the exact 63-bit integer range."""


class NoConvergence(DynamicsError):
    pass


class DerivativeSingular(DynamicsError):
    pass


class IndexExcluded(DynamicsError, ValueError):
    """Parameter index n-1 or n (not part of the family)."""


class InfinityPoint(DynamicsError, ValueError):
    pass


class IndexOutOfRange(DynamicsError, IndexError):
    pass


class WrongLength(DynamicsError, ValueError):
    pass


class ConditionsNotMet(DynamicsError):
    pass


class Exhausted(DynamicsError):
    """Search ran out of admissible candidates or of node budget.

    ``slot`` is the deepest slot reached and ``candidate_dets`` the
    determinant moduli seen there.
    """

    def __init__(self, message, slot=None, candidate_dets=(), nodes=0):
        super().__init__(message)
        self.slot = slot
        self.candidate_dets = list(candidate_dets)
        self.nodes = nodes


class VerificationFailed(DynamicsError):
    def __init__(self, check, message):
        super().__init__(f"{check}: {message}")
        self.check = check
