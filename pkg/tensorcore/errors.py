"""Exception hierarchy shared by every package."""


class VanEstError(Exception):
    """Base class for all library errors."""


class DimensionError(VanEstError):
    """Shapes, degrees or index ranges do not match."""


class TruncationError(VanEstError):
    """A jet or polynomial degree exceeds its declared truncation."""


class BudgetError(VanEstError):
    """Requested derivative depth exceeds the jet or recursion budget."""


class NormalizationError(VanEstError):
    """A cochain does not vanish on degenerate simplices."""


class StructureError(VanEstError):
    """Invalid algebraic data: brackets, representations, groupoid axioms."""


class QuadratureError(VanEstError):
    """No quadrature available, or its residual is above tolerance."""


class HypothesisError(VanEstError):
    """Hypotheses of a check are not met by the supplied data."""


class ConfigError(VanEstError):
    """Job configuration is malformed or inconsistent."""


class ExprSyntaxError(VanEstError):
    """Cochain expression does not parse or does not type-check."""

    def __init__(self, message: str, line: int = 1, column: int = 1, expected: tuple = ()):
        self.line = line
        self.column = column
        self.expected = tuple(expected)
        where = f"line {line}, column {column}"
        if self.expected:
            message = f"{message} (expected one of: {', '.join(self.expected)})"
        super().__init__(f"{where}: {message}")


class ExprNameError(VanEstError):
    """Unknown identifier or index outside the declared dimensions."""

    def __init__(self, message: str, line: int = 1, column: int = 1):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")
