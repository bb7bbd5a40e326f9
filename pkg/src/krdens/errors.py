"""Exception types shared across the package."""


class PreconditionError(ValueError):
    """An input violates a documented precondition (CLI exit code 2)."""


class InexactDivisionError(ArithmeticError):
    """Exact polynomial division left a nonzero remainder.

    Raised only when a closed-form expression has been transcribed wrongly,
    since every division performed by this package is known to be exact.
    """


class BudgetExceededError(RuntimeError):
    """A brute-force enumeration would exceed the configured size (exit code 3)."""

    def __init__(self, size, budget):
        super().__init__(f"instance too large: {size} > budget {budget}")
        self.size = size
        self.budget = budget


def require(condition, message):
    if not condition:
        raise PreconditionError(message)
