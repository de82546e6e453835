class InternalConsistencyError(RuntimeError):
    """A computed object violates a property it is guaranteed to have.

    Raised for outcomes that would contradict a theorem (a Turán witness
    containing a Fano plane, a dense graph without K4), i.e. bugs rather
    than bad input.
    """


class BudgetExhausted(RuntimeError):
    """A budgeted search stopped before finishing."""


class InputError(ValueError):
    """Malformed or inconsistent user input (files, flags)."""
