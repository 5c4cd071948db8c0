"""Exception hierarchy shared by every module."""


class FracBurgersError(Exception):
    """Base class for all library errors."""


class ParseError(FracBurgersError):
    def __init__(self, message: str, column: int):
        super().__init__(f"{message} (column {column})")
        self.message = message
        self.column = column


class UnknownIdentifierError(ParseError):
    pass


class ExponentBelowOrderError(FracBurgersError):
    """The power rule was asked for a term outside the operator's domain."""


class NotCommensurateError(FracBurgersError):
    pass


class NotPowerSumError(FracBurgersError):
    """An expression cannot be written as a generalized power sum."""


class DomainError(FracBurgersError):
    pass


class DecompositionError(FracBurgersError):
    """A vector field does not lie in the span of the generators."""


class MissingParameterError(FracBurgersError):
    pass


class ModeIncompatibleError(FracBurgersError):
    """A residual semantics cannot be applied to the given solution."""
