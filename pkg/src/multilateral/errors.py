"""Exception types shared across the package."""


class InvalidArgument(ValueError):
    """Raised when an input violates an operation's preconditions."""


class ResourceLimit(RuntimeError):
    """Raised when a computation would exceed a configured size budget.

    ``bound`` is the budget that was hit, ``required`` the size that was asked for.
    """

    def __init__(self, message: str, bound: int | None = None, required: int | None = None):
        super().__init__(message)
        self.bound = bound
        self.required = required


class DegenerateParameters(ValueError):
    """Raised when closed-form analysis hits a singular system."""
