"""Exception hierarchy shared by every tracealg module."""


class TraceAlgError(ValueError):
    """Base class for all library errors."""


class MissingVariable(TraceAlgError):
    pass


class DenominatorVanishes(TraceAlgError):
    pass


class NotSymmetric(TraceAlgError):
    pass


class MissingImage(TraceAlgError):
    pass


class IndexOutOfRange(TraceAlgError):
    pass


class SizeMismatch(TraceAlgError):
    pass


class NotLinearInAuxiliary(TraceAlgError):
    pass


class DEvenRejected(TraceAlgError):
    pass


class MTooLarge(TraceAlgError):
    pass


class OddDimension(TraceAlgError):
    pass


class BadIndex(TraceAlgError):
    pass


class ModeMismatch(TraceAlgError):
    pass


class WrongSize(TraceAlgError):
    pass


class DimensionMismatch(TraceAlgError):
    pass


class TermBudgetExceeded(TraceAlgError):
    """A polynomial product grew past the configured term budget."""

    def __init__(self, terms: int, budget: int) -> None:
        super().__init__(f"product has {terms} terms, budget is {budget}")
        self.terms = terms
        self.budget = budget


class ReynoldsIterationCap(TraceAlgError):
    pass


class ConfigError(TraceAlgError):
    pass


class ExprSyntaxError(TraceAlgError):
    """Parse failure with a 1-based position and the tokens that would have been accepted."""

    def __init__(self, message: str, line: int, column: int,
        expected: tuple[str, ...] = ()) -> None:
        where = f"line {line} column {column}"
        if expected:
            where += f", expected one of {', '.join(expected)}"
        super().__init__(f"{message} at {where}")
        self.line = line
        self.column = column
        self.expected = expected
