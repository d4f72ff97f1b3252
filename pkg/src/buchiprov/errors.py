"""Exception hierarchy shared across the package."""


class BuchiProvError(Exception):
    """Base class for all errors raised by buchiprov."""


class ParseError(BuchiProvError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


class InvalidGameError(BuchiProvError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("invalid game: " + "; ".join(str(v) for v in self.violations))


class UnassignedVariableError(BuchiProvError, KeyError):
    def __init__(self, variable):
        self.variable = variable
        super().__init__(f"no value assigned to variable {variable!r}")

    def __str__(self):
        return self.args[0]


class DualityError(BuchiProvError):
    """Mismatched duality relations or an assignment violating h(x)*h(x~) = 0."""


class SizeLimitError(BuchiProvError):
    """A polynomial grew beyond the configured monomial limit."""


class BudgetExceededError(BuchiProvError):
    """An iteration or enumeration ran past its step/node budget."""


class ConvergenceError(BuchiProvError):
    """A greatest fixed point could not be certified."""


class RepairError(BuchiProvError):
    """A repair request lies outside its spec or breaks the game model."""


class PreconditionViolated(BuchiProvError):
    """Raised when a finite-use query finds zero or several absorbing positional monomials."""
