"""Exception types shared by the exact-arithmetic layer."""


class PolycoreError(Exception):
    pass


class UnboundVariableError(PolycoreError, KeyError):
    """Evaluation point does not bind every variable of the polynomial."""

    def __init__(self, names):
        self.names = tuple(names)
        super().__init__(f"unbound variable(s): {', '.join(self.names)}")

    def __str__(self):
        return self.args[0]


class ZeroFunctionDivision(PolycoreError, ZeroDivisionError):
    """Division of a rational function by the zero function."""


class BudgetExceeded(PolycoreError):
    """A work budget was exhausted.

    ``stats`` carries whatever partial statistics the caller collected and
    ``partial`` any partial result worth keeping.
    """

    def __init__(self, message, stats=None, partial=None):
        super().__init__(message)
        self.stats = dict(stats or {})
        self.partial = partial


class ParseError(PolycoreError, ValueError):
    def __init__(self, message, text, pos):
        self.text = text
        self.pos = pos
        super().__init__(f"{message} at position {pos}: {text!r}")
