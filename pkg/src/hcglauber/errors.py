class InvalidInput(ValueError):
    """Malformed input or a violated precondition (CLI exit code 2)."""


class BudgetExceeded(RuntimeError):
    """An exact computation would exceed its configured size budget (CLI exit code 3)."""
