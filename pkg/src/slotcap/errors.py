"""Exception hierarchy shared by all slotcap modules."""


class SlotCapError(Exception):
    """Base class for every error raised by slotcap."""


class RangeError(SlotCapError, ValueError):
    """An argument lies outside the documented working range."""


class SingularityError(SlotCapError, ArithmeticError):
    """Evaluation requested at (or too close to) a singular point."""

    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point


class ConvergenceError(SlotCapError, ArithmeticError):
    """Quadrature refinement failed to reach the requested tolerance."""

    def __init__(self, message, estimates=()):
        super().__init__(message)
        self.estimates = tuple(estimates)


class LinearAlgebraError(SlotCapError, ArithmeticError):
    """A linear solve was singular or too badly conditioned to trust."""

    def __init__(self, message, condition=None):
        super().__init__(message)
        self.condition = condition


class PassivityError(SlotCapError, ValueError):
    """A resistance matrix has eigenvalues that are significantly negative."""


class ConfigError(SlotCapError, ValueError):
    """A scenario configuration could not be parsed or validated."""
