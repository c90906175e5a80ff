"""Exception types shared by all modules."""


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class DimensionError(ValueError):
    """Operand shapes do not agree."""


class SizeGuardError(RuntimeError):
    """A problem size exceeds a hard enumeration or overflow guard."""


class ConvergenceError(ArithmeticError):
    """An iterative solver exhausted its budget before converging."""
