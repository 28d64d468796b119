"""Exception types raised across the package."""


class LinkflexError(Exception):
    """Base class for domain errors (reported with exit code 1 by the CLI)."""


class NotADisplacement(LinkflexError):
    pass


class NotOrderTwo(LinkflexError):
    pass


class NotOnStudyQuadric(LinkflexError):
    pass


class ZeroDivisor(LinkflexError):
    pass


class NotMotionPolynomial(LinkflexError):
    pass


class DegenerateRemainder(LinkflexError):
    """The remainder modulo a norm factor has no common right zero with it."""


class InconsistentCase(LinkflexError):
    pass


class InfinitelyMany(LinkflexError):
    pass


class NotGeneric(LinkflexError):
    pass


class NotARevolution(LinkflexError):
    pass


class NotRealizable(LinkflexError):
    pass


class PoleAtSample(LinkflexError):
    pass


class ParallelAxes(LinkflexError):
    pass


class EmptyColorClass(LinkflexError):
    pass


class TooLarge(LinkflexError):
    pass


class NotBoundary(LinkflexError):
    pass


class NotDixonCompatible(LinkflexError):
    pass


class OutOfDomain(LinkflexError):
    pass


class BadInvolution(LinkflexError):
    pass


class DegenerateAngle(LinkflexError):
    pass


class Ambiguous(LinkflexError):
    def __init__(self, message, candidates=()):
        super().__init__(message)
        self.candidates = tuple(candidates)


class NewtonDiverged(LinkflexError):
    def __init__(self, message, last_good=None, steps=0):
        super().__init__(message)
        self.last_good = last_good
        self.steps = steps


class RelationViolated(LinkflexError):
    pass


class NotPlanar(LinkflexError):
    pass


class NoRealSixth(LinkflexError):
    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point


class OnAxis(LinkflexError):
    pass


class ImaginaryLength(LinkflexError):
    pass


class NotInvolution(LinkflexError):
    pass
