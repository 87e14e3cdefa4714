"""Exception hierarchy shared across the package."""


class PermlabError(Exception):
    """Base class for all library errors."""


class FieldMismatchError(PermlabError, TypeError):
    """Scalars or matrices from incompatible fields were combined."""


class DimensionError(PermlabError, ValueError):
    pass


class SizeGuardError(DimensionError):
    """An operation was asked to run beyond its configured size limit."""


class NotHermitianError(PermlabError, ValueError):
    pass


class NotPSDError(PermlabError, ValueError):
    pass


class DomainError(PermlabError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ConvergenceError(PermlabError, ArithmeticError):
    def __init__(self, message, bracket=None):
        super().__init__(message)
        self.bracket = bracket


class ParseError(PermlabError, ValueError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class VerificationError(PermlabError):
    def __init__(self, quantity, expected, observed):
        super().__init__(f"{quantity}: expected {expected}, observed {observed}")
        self.quantity = quantity
        self.expected = expected
        self.observed = observed


class SearchStateError(PermlabError, ValueError):
    pass
