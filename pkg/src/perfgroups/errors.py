class BudgetExceeded(RuntimeError):
    """A configurable size or work cap was passed.

    The caller may retry with a larger cap.
    """

    def __init__(self, what, limit, value=None):
        self.what = what
        self.limit = limit
        self.value = value
        msg = f"budget exceeded: {what} (limit {limit}"
        if value is not None:
            msg += f", needed {value}"
        super().__init__(msg + ")")


class SearchExhausted(RuntimeError):
    pass


class InvariantViolation(AssertionError):
    """Raised when a mathematical invariant fails. Always a bug."""
