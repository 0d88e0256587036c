"""Exception types raised across the package."""


class FracstarError(Exception):
    """Base class for every error raised by fracstar."""


class DomainError(FracstarError, ValueError):
    """An argument lies outside the domain where an operation is defined."""


class PoleError(DomainError):
    """Evaluation point sits (numerically) on a pole."""


class BranchError(DomainError):
    """Point lies on the branch cut [0, inf) of the principal logarithm of -z."""


class InsufficientData(FracstarError, ValueError):
    pass


class TruncationError(FracstarError, ValueError):
    """A finite Taylor representation ran out of coefficients."""


class StarViolation(FracstarError, ValueError):
    """A point outside the Mittag-Leffler star was paired with a reference value."""


class SlowConvergence(FracstarError, ArithmeticError):
    """The series would need more terms than allowed; use the contour integral."""


class TailError(FracstarError, ArithmeticError):
    """No admissible contour truncation meets the requested tolerance."""


class BoundViolation(FracstarError, AssertionError):
    """The scale norm inequality failed; ``witness`` holds the offending element."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness
