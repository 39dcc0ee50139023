"""Exceptions shared across the package."""


class ShufflemixError(Exception):
    """Base class for errors raised by this package."""


class CapExceededError(ShufflemixError):
    """A step-capped search ran out of budget before reaching its target.

    Carries the number of steps taken and the last observed value so the
    caller can decide whether to retry with a larger cap.
    """

    def __init__(self, message, steps=None, last_value=None):
        super().__init__(message)
        self.steps = steps
        self.last_value = last_value


class CapacityError(ShufflemixError):
    """The requested exact computation exceeds a hard size limit."""


class NoConvergenceError(ShufflemixError):
    """An iterative numerical routine failed to reach its tolerance."""

    def __init__(self, message, iterations=None, residual=None, last_value=None):
        super().__init__(message)
        self.iterations = iterations
        self.residual = residual
        self.last_value = last_value
