"""
Exception types for the garland calculus.
"""


class GarlandError(ValueError):
    """Base class for every error raised by the engine."""


class ShapeValidationError(GarlandError):
    pass


class UnknownVariableError(GarlandError):
    pass


class SignError(GarlandError):
    pass


class ParamsMismatchError(GarlandError):
    pass


class BoundExceededError(GarlandError):
    pass


class UnknownIdentityError(GarlandError):
    pass


class MinimizationError(GarlandError):
    pass


class UnsupportedBoundError(GarlandError):
    pass


class ElementSyntaxError(GarlandError):
    """Syntax error in element text, with a 1-based position."""

    def __init__(self, message, line=1, column=1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column
