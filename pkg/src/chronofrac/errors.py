"""Exception hierarchy shared by every chronofrac module."""

from __future__ import annotations


class ChronofracError(Exception):
    """Base class for all domain errors raised by chronofrac."""


class PointNotInScale(ChronofracError, ValueError):
    def __init__(self, t, scale=None):
        self.t = t
        self.scale = scale
        where = f" {scale}" if scale is not None else ""
        super().__init__(f"point {t} is not in time scale{where}")


class NotInKappa(ChronofracError):
    """The point is a left-scattered maximum, where no derivative exists."""


class NegativeBaseUndefined(ChronofracError, ValueError):
    """A negative base was raised to an order that has no real value."""


class NoApproach(ChronofracError):
    """The required one-sided neighbourhood of the point holds no scale points."""


class Divergent(ChronofracError):
    """The limit quotient did not settle within the sample budget."""


class TablePointMissing(ChronofracError, KeyError):
    def __init__(self, t):
        self.t = t
        super().__init__(f"no tabulated value at t={t}")

    def __str__(self) -> str:
        return self.args[0]


class UnsupportedDensePath(ChronofracError):
    """Iterated delta derivatives at a dense point need a symbolic function."""


class SingularPoint(ChronofracError, ZeroDivisionError):
    """A reciprocal or quotient rule was requested where a denominator vanishes."""


class HypothesisViolated(ChronofracError):
    """No chain-rule witness exists; an assumption of the chain rule fails."""


class WindowEmpty(ChronofracError, ValueError):
    """The integration window contains no scale points."""


class OutsideWindow(ChronofracError, ValueError):
    """Evaluation requested outside the window an antiderivative was built on."""


class ExpressionSyntaxError(ChronofracError, ValueError):
    def __init__(self, message: str, position: int):
        self.position = position
        super().__init__(f"{message} at position {position}")


class EvaluationError(ChronofracError, ArithmeticError):
    """An expression could not be evaluated at the requested point."""


class DivisionByZero(EvaluationError, ZeroDivisionError):
    pass


class NonDifferentiable(ChronofracError):
    pass


class ParseError(ChronofracError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}{message}")


class DuplicateTimestampConflict(ChronofracError, ValueError):
    def __init__(self, t):
        self.t = t
        super().__init__(f"conflicting values for duplicate timestamp {t}")
