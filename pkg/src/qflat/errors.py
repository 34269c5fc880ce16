"""Error types shared by the budgeted computations in this package."""


class BudgetExceeded(Exception):
    """The requested computation would exceed the operation budget."""
