class AiryspecError(Exception):
    """Base class for library errors."""


class DomainError(AiryspecError, ValueError):
    """Input outside the mathematical domain (e.g. non-finite argument)."""


class ArgumentError(AiryspecError, ValueError):
    """Invalid index, order or configuration value."""


class ConvergenceError(AiryspecError, ArithmeticError):
    """A numerical procedure failed to reach its error budget."""

    def __init__(self, message, **diagnostics):
        super().__init__(message)
        self.diagnostics = diagnostics


class PropertyFailure(AiryspecError, AssertionError):
    """A verified property (monotonicity, positivity, ...) does not hold."""

    def __init__(self, message, **diagnostics):
        super().__init__(message)
        self.diagnostics = diagnostics
