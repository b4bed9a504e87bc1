"""Exception types shared across the package."""


class ValidationError(ValueError):
    """An instance, config, or input file violates a structural invariant."""


class BudgetInfeasibleError(ValidationError):
    """The upper bounds cannot absorb the total fund (sum(U) < M0)."""


class EnumerationLimitError(RuntimeError):
    """Brute-force enumeration would exceed its node budget."""
