"""Exception types shared across the package."""


class PreconditionError(ValueError):
    """An operation was called with inputs outside its contract."""


class InvariantError(AssertionError):
    """An internal identity or proven inequality failed to hold."""
