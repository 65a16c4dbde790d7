"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class BudgetExceededError(RuntimeError):
    """An enumeration would exceed the configured size budget."""


class InfeasibleError(RuntimeError):
    """The constraint set of a variational problem is empty."""


class ConvergenceError(RuntimeError):
    """An iterative solver hit its iteration cap.

    The last iterate is kept on ``last`` so callers can inspect or report it.
    """

    def __init__(self, message, last=None):
        super().__init__(message)
        self.last = last
