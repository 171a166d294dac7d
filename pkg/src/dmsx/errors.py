"""Exception hierarchy shared by all modules."""


class DmsxError(Exception):
    """Base class for every error raised by the package."""


class ValidationError(DmsxError):
    """An input object violates a structural invariant."""


class NotASurface(ValidationError):
    pass


class DegreeSumViolation(ValidationError):
    pass


class MultipleBoundarySides(ValidationError):
    pass


class UnknownArc(ValidationError):
    pass


class SlideDegenerate(ValidationError):
    pass


class BadParameters(ValidationError):
    pass


class InvalidWalk(ValidationError):
    pass


class EndpointMismatch(ValidationError):
    pass


class BadAttachment(ValidationError):
    pass


class NotAClosedArc(ValidationError):
    pass


class InternalCheckFailure(DmsxError):
    """A self-check that must never fail did fail; signals a bug."""


class DSquareNonzero(InternalCheckFailure):
    pass


class AssociativityFailure(InternalCheckFailure):
    pass


class NotReduced(DmsxError):
    pass


class NotNormalized(DmsxError):
    pass


class NotClosed(DmsxError):
    pass


class NotSpherical(DmsxError):
    pass
