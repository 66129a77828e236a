"""Exception types shared across the engine."""


class InputError(ValueError):
    """Malformed user input: bad permutation, degree mismatch, parse error."""


class PreconditionError(ValueError):
    """An operation was called outside its contract (e.g. non-normal quotient)."""


class BudgetExceeded(RuntimeError):
    """A computation hit its enumeration budget.

    This is a first-class outcome: harness code catches it and records the
    affected clause as skipped instead of fabricating a verdict.
    """

    def __init__(self, what: str, needed=None, budget=None):
        self.what = what
        self.needed = needed
        self.budget = budget
        detail = f"{what} exceeds budget"
        if needed is not None and budget is not None:
            detail += f" ({needed} > {budget})"
        super().__init__(detail)


class UnknownGroupError(KeyError):
    """Requested builtin group id does not exist."""
