"""Exception hierarchy shared by all wtmac modules."""


class ValidationError(ValueError):
    """Malformed or inconsistent input (bad normalization, shape mismatch, ...)."""


class PreconditionError(ValidationError):
    """An operation was called outside its documented precondition."""


class ResourceBudgetError(RuntimeError):
    """A dense enumeration would exceed the configured cell budget."""


class DegenerateTypicalityError(ValidationError):
    """The requested (conditional) typical set is empty."""


class ReductionInfeasibleError(PreconditionError):
    """Rate splitting produced a triple outside the target region.

    Carries the violated constraint description in ``violation``.
    """

    def __init__(self, message: str, violation: str = ""):
        super().__init__(message)
        self.violation = violation


class BlocklengthTooSmallError(PreconditionError):
    """A code-size window contains no integer at this blocklength.

    ``required_n`` holds an estimate of the smallest workable blocklength.
    """

    def __init__(self, message: str, required_n: int | None = None):
        super().__init__(message)
        self.required_n = required_n


class CardinalityOverflowError(PreconditionError):
    """A conference message set does not fit its capacity-limited alphabet."""
