"""Functions defined on a time scale.

``ExprFn`` wraps a parsed expression and can be evaluated anywhere on the
real line.  ``TableFn`` holds sampled values and refuses to answer off its
sample points: functions on a time scale are defined on the scale only,
so nothing is interpolated.
"""

from __future__ import annotations

import operator
from bisect import bisect_left
from fractions import Fraction
from typing import Callable, Mapping

from . import expr as ex
from .errors import DivisionByZero, TablePointMissing
from .timescale import FiniteUnion, Real, as_exact, close


class FnOnScale:
    """A real-valued function on a time scale."""

    #: symbolic form, when one is available
    expr: ex.Expr | None = None

    def __call__(self, t: Real) -> float:
        raise NotImplementedError

    def increment(self, a: Real, b: Real) -> float:
        """``f(a) - f(b)``; subclasses may compute it more accurately."""
        return self(a) - self(b)

    def _combine(self, other, op, symbol):
        if not isinstance(other, FnOnScale):
            other = constant(other)
        if self.expr is not None and other.expr is not None:
            return ExprFn(symbol(self.expr, other.expr))
        return CombinedFn(op, self, other)

    def __add__(self, other):
        return self._combine(other, operator.add, ex.Add)

    def __radd__(self, other):
        return constant(other)._combine(self, operator.add, ex.Add)

    def __sub__(self, other):
        return self._combine(other, operator.sub, ex.Sub)

    def __rsub__(self, other):
        return constant(other)._combine(self, operator.sub, ex.Sub)

    def __mul__(self, other):
        return self._combine(other, operator.mul, ex.Mul)

    def __rmul__(self, other):
        return constant(other)._combine(self, operator.mul, ex.Mul)

    def __truediv__(self, other):
        return self._combine(other, _checked_div, ex.Div)

    def __rtruediv__(self, other):
        return constant(other)._combine(self, _checked_div, ex.Div)

    def __neg__(self):
        return constant(-1) * self


def _checked_div(a: float, b: float) -> float:
    if b == 0.0:
        raise DivisionByZero("division by zero")
    return a / b


class ExprFn(FnOnScale):
    """Expression-backed function; evaluable at every real ``t``."""

    def __init__(self, e: ex.Expr | str):
        self.expr = ex.parse(e) if isinstance(e, str) else e

    def __call__(self, t: Real) -> float:
        return ex.evaluate(self.expr, t)

    def __repr__(self) -> str:
        return f"ExprFn({ex.to_string(self.expr)!r})"

    def __str__(self) -> str:
        return ex.to_string(self.expr)

    def derivative(self) -> ExprFn:
        return ExprFn(ex.classical_derivative(self.expr))


def fn(text: str) -> ExprFn:
    """Shorthand: ``fn("t^2")``."""
    return ExprFn(text)


def constant(c) -> ExprFn:
    value = c if isinstance(c, (Fraction, float)) else as_exact(c)
    return ExprFn(ex.Const(value))


class TableFn(FnOnScale):
    """Tabulated samples ``t -> value``; lookups off the keys raise."""

    def __init__(self, points: Mapping[Real, float]):
        items = sorted((as_exact(k), float(v)) for k, v in points.items())
        self._keys = [k for k, _ in items]
        self._values = [v for _, v in items]

    @property
    def keys(self) -> list[Real]:
        return list(self._keys)

    def items(self):
        return zip(self._keys, self._values)

    def scale(self) -> FiniteUnion:
        return FiniteUnion([(k, k) for k in self._keys])

    def __len__(self) -> int:
        return len(self._keys)

    def __call__(self, t: Real) -> float:
        x = as_exact(t)
        i = bisect_left(self._keys, x)
        for j in (i - 1, i):
            if 0 <= j < len(self._keys) and close(x, self._keys[j]):
                return self._values[j]
        raise TablePointMissing(t)

    def __repr__(self) -> str:
        return f"TableFn(<{len(self._keys)} points>)"


class CombinedFn(FnOnScale):
    """Pointwise combination of two functions without a symbolic form."""

    def __init__(self, op: Callable[[float, float], float], f: FnOnScale, g: FnOnScale):
        self.op, self.f, self.g = op, f, g

    def __call__(self, t: Real) -> float:
        return self.op(self.f(t), self.g(t))


class CallableFn(FnOnScale):
    """Adapter for a plain Python callable."""

    def __init__(self, func: Callable[[float], float], name: str = "callable"):
        self.func, self.name = func, name

    def __call__(self, t: Real) -> float:
        return float(self.func(float(t)))

    def __repr__(self) -> str:
        return f"CallableFn({self.name})"


def as_fn(f) -> FnOnScale:
    if isinstance(f, FnOnScale):
        return f
    if isinstance(f, (str, ex.Expr)):
        return ExprFn(f)
    if isinstance(f, Mapping):
        return TableFn(f)
    if callable(f):
        return CallableFn(f)
    return constant(f)
