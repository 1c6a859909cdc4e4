"""Closed-form test functions of one variable ``t``.

Grammar (``^`` binds tighter than unary minus, which binds tighter than
``*``/``/``, which bind tighter than ``+``/``-``)::

    expr     := term (("+" | "-") term)*
    term     := unary (("*" | "/") unary)*
    unary    := ("-" | "+") unary | power
    power    := atom ("^" unary)?          # right associative
    atom     := NUMBER | "t" | FUNC "(" expr ")" | "(" expr ")"
    FUNC     := "sin" | "cos" | "exp" | "log" | "abs"
    NUMBER   := decimal literal, optionally with exponent (1e-3)

Exponents must fold to an exact rational constant, so ``t^(1/3)`` is fine
and ``t^sin(1)`` is rejected at parse time.  Rational literals are written
as divisions (``2/3``) and are kept exact.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import DivisionByZero, EvaluationError, ExpressionSyntaxError, NonDifferentiable
from .orders import real_power


class Expr:
    """Base class of the immutable expression tree."""

    def __call__(self, t) -> float:
        return evaluate(self, t)

    def __str__(self) -> str:
        return to_string(self)


@dataclass(frozen=True)
class Const(Expr):
    value: Fraction | float


@dataclass(frozen=True)
class Var(Expr):
    pass


@dataclass(frozen=True)
class Add(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Sub(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Mul(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Div(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: Fraction


@dataclass(frozen=True)
class Call(Expr):
    name: str
    arg: Expr


FUNCTIONS = ("sin", "cos", "exp", "log", "abs")
Number = Union[int, float, Fraction]

# ---------------------------------------------------------------- parsing

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)"
    r"|(?P<name>[A-Za-z_]\w*)"
    r"|(?P<op>\*\*|[-+*/^()]))"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m:
            raise ExpressionSyntaxError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        start = m.start(kind)
        value = m.group(kind)
        if kind == "op" and value == "**":
            value = "^"
        tokens.append((kind, value, start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


def _exact_const(e: Expr) -> bool:
    return isinstance(e, Const) and isinstance(e.value, Fraction)


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str):
        kind, v, pos = self.take()
        if v != value or kind == "end":
            what = "end of input" if kind == "end" else repr(v)
            raise ExpressionSyntaxError(f"expected {value!r}, found {what}", pos)

    def parse(self) -> Expr:
        e = self.expr()
        kind, v, pos = self.peek()
        if kind != "end":
            raise ExpressionSyntaxError(f"unexpected {v!r}", pos)
        return e

    def expr(self) -> Expr:
        e = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            rhs = self.term()
            e = Add(e, rhs) if op == "+" else Sub(e, rhs)
        return e

    def term(self) -> Expr:
        e = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.take()[1]
            rhs = self.unary()
            if op == "*":
                e = Mul(e, rhs)
            elif _exact_const(e) and _exact_const(rhs) and rhs.value != 0:
                # "1/2" is the rational literal, which is how such constants print
                e = Const(e.value / rhs.value)
            else:
                e = Div(e, rhs)
        return e

    def unary(self) -> Expr:
        kind, v, _ = self.peek()
        if kind == "op" and v == "-":
            self.take()
            inner = self.unary()
            if isinstance(inner, Const):
                return Const(-inner.value)
            return Mul(Const(Fraction(-1)), inner)
        if kind == "op" and v == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            exp_pos = self.peek()[2]
            exponent = self.unary()
            value = fold_constant(exponent)
            if not isinstance(value, Fraction):
                raise ExpressionSyntaxError("exponent must be a rational constant", exp_pos)
            if isinstance(base, Const):
                folded = fold_constant(Pow(base, value))
                if folded is not None:
                    return Const(folded)
            return Pow(base, value)
        return base

    def atom(self) -> Expr:
        kind, v, pos = self.take()
        if kind == "num":
            return Const(Fraction(v))
        if kind == "name":
            if v == "t":
                return Var()
            if v in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(v, arg)
            raise ExpressionSyntaxError(f"unknown name {v!r}", pos)
        if kind == "op" and v == "(":
            e = self.expr()
            self.expect(")")
            return e
        what = "end of input" if kind == "end" else repr(v)
        raise ExpressionSyntaxError(f"unexpected {what}", pos)


def parse(text: str) -> Expr:
    """Parse ``text`` into an expression tree; raises ExpressionSyntaxError."""
    return _Parser(text).parse()


def fold_constant(e: Expr) -> Fraction | float | None:
    """Value of a variable-free subtree, kept exact where possible."""
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Var):
        return None
    if isinstance(e, (Add, Sub, Mul, Div)):
        a, b = fold_constant(e.left), fold_constant(e.right)
        if a is None or b is None:
            return None
        if isinstance(e, Add):
            return a + b
        if isinstance(e, Sub):
            return a - b
        if isinstance(e, Mul):
            return a * b
        if b == 0:
            return None
        return a / b
    if isinstance(e, Pow):
        a = fold_constant(e.base)
        if a is None:
            return None
        if isinstance(a, Fraction) and e.exponent.denominator == 1:
            if a == 0 and e.exponent < 0:
                return None
            return a**e.exponent.numerator
        return None
    return None


# ------------------------------------------------------------- evaluation

def evaluate(e: Expr, t) -> float:
    """Evaluate ``e`` at ``t`` in floating point.

    Division by zero raises DivisionByZero and logarithms of nonpositive
    numbers raise EvaluationError; no NaN is ever returned silently.
    """
    x = float(t)
    try:
        return _eval(e, x)
    except OverflowError as exc:
        raise EvaluationError(f"overflow evaluating {to_string(e)} at t={t}") from exc


def _eval(e: Expr, x: float) -> float:
    if isinstance(e, Const):
        return float(e.value)
    if isinstance(e, Var):
        return x
    if isinstance(e, Add):
        return _eval(e.left, x) + _eval(e.right, x)
    if isinstance(e, Sub):
        return _eval(e.left, x) - _eval(e.right, x)
    if isinstance(e, Mul):
        return _eval(e.left, x) * _eval(e.right, x)
    if isinstance(e, Div):
        den = _eval(e.right, x)
        if den == 0.0:
            raise DivisionByZero(f"division by zero in {to_string(e)} at t={x}")
        return _eval(e.left, x) / den
    if isinstance(e, Pow):
        base = _eval(e.base, x)
        try:
            return real_power(base, e.exponent)
        except ZeroDivisionError as exc:
            raise DivisionByZero(f"0 to a negative power in {to_string(e)} at t={x}") from exc
    if isinstance(e, Call):
        u = _eval(e.arg, x)
        if e.name == "sin":
            return math.sin(u)
        if e.name == "cos":
            return math.cos(u)
        if e.name == "exp":
            return math.exp(u)
        if e.name == "abs":
            return abs(u)
        if e.name == "log":
            if u <= 0.0:
                raise EvaluationError(f"log of nonpositive value {u} at t={x}")
            return math.log(u)
    raise TypeError(f"not an expression node: {e!r}")


# --------------------------------------------------------------- printing

_PREC = {Add: 1, Sub: 1, Mul: 2, Div: 2}


def _fmt_number(v: Fraction | float) -> str:
    if isinstance(v, Fraction):
        if v.denominator == 1:
            return str(v.numerator)
        return f"{v.numerator}/{v.denominator}"
    return repr(float(v))


def _prec(e: Expr) -> int:
    if isinstance(e, Const):
        v = e.value
        if v < 0 or (isinstance(v, Fraction) and v.denominator != 1):
            return 2  # printed as -n or p/q
        return 5
    if isinstance(e, Pow):
        return 4
    if isinstance(e, Mul) and e.left == Const(Fraction(-1)):
        return 3  # unary minus
    return _PREC.get(type(e), 5)


def to_string(e: Expr) -> str:
    """Render ``e`` in the input grammar; ``parse(to_string(e))`` evaluates
    identically to ``e``."""
    if isinstance(e, Const):
        return _fmt_number(e.value)
    if isinstance(e, Var):
        return "t"
    if isinstance(e, Call):
        return f"{e.name}({to_string(e.arg)})"
    if isinstance(e, Pow):
        base = to_string(e.base)
        if _prec(e.base) <= 4:
            base = f"({base})"
        return f"{base}^({_fmt_number(e.exponent)})"
    if isinstance(e, Mul) and e.left == Const(Fraction(-1)):
        inner = to_string(e.right)
        if _prec(e.right) < 4:
            inner = f"({inner})"
        return f"-{inner}"
    p = _PREC[type(e)]
    left = to_string(e.left)
    if _prec(e.left) < p:
        left = f"({left})"
    right = to_string(e.right)
    # right operand of - and / needs parens at equal precedence too
    if _prec(e.right) < p or (_prec(e.right) == p and isinstance(e, (Sub, Div, Mul))):
        right = f"({right})"
    op = {Add: "+", Sub: "-", Mul: "*", Div: "/"}[type(e)]
    return f"{left} {op} {right}"


# ------------------------------------------------------ symbolic calculus

ZERO = Const(Fraction(0))
ONE = Const(Fraction(1))


def _is(e: Expr, v) -> bool:
    return isinstance(e, Const) and e.value == v


def _add(a: Expr, b: Expr) -> Expr:
    if _is(a, 0):
        return b
    if _is(b, 0):
        return a
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value + b.value)
    return Add(a, b)


def _sub(a: Expr, b: Expr) -> Expr:
    if _is(b, 0):
        return a
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value - b.value)
    if _is(a, 0):
        return _mul(Const(Fraction(-1)), b)
    return Sub(a, b)


def _mul(a: Expr, b: Expr) -> Expr:
    if _is(a, 0) or _is(b, 0):
        return ZERO
    if _is(a, 1):
        return b
    if _is(b, 1):
        return a
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value * b.value)
    if isinstance(b, Const) and not isinstance(a, Const):
        a, b = b, a
    if isinstance(a, Const) and isinstance(b, Mul) and isinstance(b.left, Const):
        return _mul(Const(a.value * b.left.value), b.right)
    return Mul(a, b)


def _div(a: Expr, b: Expr) -> Expr:
    if _is(a, 0):
        return ZERO
    if _is(b, 1):
        return a
    if isinstance(a, Const) and isinstance(b, Const) and b.value != 0:
        return Const(a.value / b.value)
    return Div(a, b)


def _pow(b: Expr, r: Fraction) -> Expr:
    if r == 0:
        return ONE
    if r == 1:
        return b
    return Pow(b, r)


def classical_derivative(e: Expr) -> Expr:
    """Symbolic ``d/dt`` by the usual rules, with constant folding only.

    ``abs`` is refused with NonDifferentiable since its derivative is not a
    total function.
    """
    if isinstance(e, Const):
        return ZERO
    if isinstance(e, Var):
        return ONE
    if isinstance(e, Add):
        return _add(classical_derivative(e.left), classical_derivative(e.right))
    if isinstance(e, Sub):
        return _sub(classical_derivative(e.left), classical_derivative(e.right))
    if isinstance(e, Mul):
        da, db = classical_derivative(e.left), classical_derivative(e.right)
        return _add(_mul(da, e.right), _mul(e.left, db))
    if isinstance(e, Div):
        da, db = classical_derivative(e.left), classical_derivative(e.right)
        num = _sub(_mul(da, e.right), _mul(e.left, db))
        return _div(num, _pow(e.right, Fraction(2)))
    if isinstance(e, Pow):
        db = classical_derivative(e.base)
        r = e.exponent
        return _mul(_mul(Const(r), _pow(e.base, r - 1)), db)
    if isinstance(e, Call):
        du = classical_derivative(e.arg)
        u = e.arg
        if e.name == "sin":
            return _mul(Call("cos", u), du)
        if e.name == "cos":
            return _mul(Const(Fraction(-1)), _mul(Call("sin", u), du))
        if e.name == "exp":
            return _mul(Call("exp", u), du)
        if e.name == "log":
            return _div(du, u)
        if e.name == "abs":
            raise NonDifferentiable("abs has no derivative at 0; refusing a total derivative")
    raise TypeError(f"not an expression node: {e!r}")


def compose(outer: Expr, inner: Expr) -> Expr:
    """Substitute ``inner`` for every ``t`` in ``outer``."""
    if isinstance(outer, Var):
        return inner
    if isinstance(outer, Const):
        return outer
    if isinstance(outer, (Add, Sub, Mul, Div)):
        return type(outer)(compose(outer.left, inner), compose(outer.right, inner))
    if isinstance(outer, Pow):
        return Pow(compose(outer.base, inner), outer.exponent)
    if isinstance(outer, Call):
        return Call(outer.name, compose(outer.arg, inner))
    raise TypeError(f"not an expression node: {outer!r}")


def is_constant(e: Expr) -> bool:
    if isinstance(e, Var):
        return False
    if isinstance(e, Const):
        return True
    if isinstance(e, Pow):
        return is_constant(e.base)
    if isinstance(e, Call):
        return is_constant(e.arg)
    return is_constant(e.left) and is_constant(e.right)
