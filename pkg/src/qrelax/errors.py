"""Exception hierarchy shared by all modules."""


class QRelaxError(Exception):
    """Base class for library errors."""


class ValidationError(QRelaxError, ValueError):
    """An input violates a value constraint (normalization, Hermiticity, range)."""


class StructureError(QRelaxError, ValueError):
    """Incompatible shapes, dimensions or subsystem factorizations."""


class NumericalError(QRelaxError, ArithmeticError):
    """A numerical routine failed to converge.

    ``diagnostics`` carries whatever the routine knew at the point of failure.
    """

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})
