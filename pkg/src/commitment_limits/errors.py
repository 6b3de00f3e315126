"""Exception types shared across the package."""


class CommitmentError(Exception):
    """Base class for all package errors."""


class NonConcave(CommitmentError):
    """An own-payoff failed the strict concavity contract."""


class RCViolated(CommitmentError):
    """An operation needing the regularity conditions was called without them."""


class EmptySet(CommitmentError):
    """min/max requested on an empty interval union."""


class UnknownFamily(CommitmentError):
    pass


class BadParams(CommitmentError):
    pass


class NotSimple(CommitmentError):
    """A commitment structure is not a partition into intervals."""


class UnsupportedClass(CommitmentError):
    pass


class InternalError(CommitmentError):
    """Numerics failed where theory guarantees an answer."""
