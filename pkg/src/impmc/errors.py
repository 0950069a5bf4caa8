"""Exception hierarchy shared across the package."""


class ImpmcError(Exception):
    """Base class for all errors raised by impmc."""


class InvalidGamble(ImpmcError, ValueError):
    pass


class InvalidRow(ImpmcError, ValueError):
    """A row credal set violates one of its invariants.

    ``state`` is filled in when the row is known to belong to a labelled
    state (e.g. while loading a model file).
    """

    def __init__(self, message, state=None):
        self.state = state
        if state is not None:
            message = f"row {state!r}: {message}"
        super().__init__(message)


class DimensionMismatch(ImpmcError, ValueError):
    pass


class UnknownState(ImpmcError, KeyError):
    def __str__(self):
        return f"unknown state label {self.args[0]!r}"


class SizeLimit(ImpmcError):
    """A combinatorial guard tripped (vertex or profile enumeration)."""


class UnsupportedRow(ImpmcError, TypeError):
    pass


class NotMaximalClass(ImpmcError, ValueError):
    pass


class IterationBudgetExceeded(ImpmcError):
    """Raised by the limit routines in strict mode.

    The best result achieved before the budget ran out is kept on
    ``result``.
    """

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class MonotonicityViolation(ImpmcError, ArithmeticError):
    """A quantity that must be non-increasing increased (numerical breakdown)."""


class ParseError(ImpmcError, ValueError):
    def __init__(self, message, line=None, field=None):
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field}")
        if where:
            message = f"{', '.join(where)}: {message}"
        super().__init__(message)
