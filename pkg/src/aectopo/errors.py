class BudgetExceeded(RuntimeError):
    """Raised when an exhaustive computation would exceed its configured budget."""


class VocabularyMismatch(ValueError):
    pass


class NotIsomorphic(ValueError):
    pass


class EvaluationError(ValueError):
    """Unbound free variable or unknown symbol during satisfaction."""


class VariablesExhausted(RuntimeError):
    """No fresh variable left in V for capture-avoiding substitution."""


class DecodeError(ValueError):
    """A theory function does not determine a unique structure."""
