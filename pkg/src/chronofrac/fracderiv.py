"""Local fractional derivatives of order ``alpha`` in ``]0, 1]`` on a time scale.

At a right-scattered point the derivative is the closed form

    f^(alpha)(t) = (f(sigma(t)) - f(t)) / mu(t)**alpha,

and at a right-dense point it is the limit of ``(f(t) - f(s)) / (t - s)**alpha``
as ``s -> t`` (two-sided for ``alpha = 1/q`` with ``q`` odd, from the left
otherwise).  Order ``1`` gives the delta derivative.  Orders ``beta >= 0``
are handled by iterating the delta derivative ``floor(beta)`` times first.
"""

from __future__ import annotations

from dataclasses import replace
from fractions import Fraction

import numpy as np
from scipy.optimize import brentq

from . import expr as ex
from .errors import (
    HypothesisViolated,
    NoApproach,
    NotInKappa,
    SingularPoint,
    UnsupportedDensePath,
)
from .functions import ExprFn, FnOnScale, as_fn
from .limits import DEFAULT_OPTIONS, DerivResult, LimitOptions, Method, limit_quotient
from .orders import FractionalOrder, HigherOrder, real_power, rpow
from .timescale import Real, TimeScale

ONE = FractionalOrder(1, 1)


def _kappa_point(T: TimeScale, t: Real) -> Real:
    p = T.snap(t)
    if not T.in_kappa(p):
        raise NotInKappa(f"t={t} is a left-scattered maximum of {T}")
    return p


def frac_derivative(
    f,
    T: TimeScale,
    t: Real,
    alpha,
    options: LimitOptions = DEFAULT_OPTIONS,
) -> DerivResult:
    """Fractional derivative of order ``alpha`` of ``f`` at ``t``.

    Parameters
    ----------
    f : FnOnScale, expression string or callable
    T : the time scale
    t : a point of ``T`` outside a left-scattered maximum
    alpha : order in ``]0, 1]`` (Fraction, ``"p/q"`` or float)

    Raises
    ------
    NotInKappa, NoApproach, Divergent, TablePointMissing
    """
    f = as_fn(f)
    alpha = FractionalOrder.of(alpha)
    p = _kappa_point(T, t)
    sig = T.sigma(p)
    if sig > p:
        mu = sig - p
        value = f.increment(sig, p) / rpow(float(mu), alpha)
        return DerivResult(value, Method.ClosedFormScattered, 0.0, 2)

    if not alpha.odd_reciprocal() and not T.classify(p).left_dense:
        raise NoApproach(
            f"order {alpha} needs a left neighbourhood, but t={t} is not left-dense in {T}"
        )
    return limit_quotient(T, p, lambda s: f.increment(p, s), alpha, options)


def delta_derivative(f, T: TimeScale, t: Real, options: LimitOptions = DEFAULT_OPTIONS) -> DerivResult:
    """The delta (Hilger) derivative: the order-1 case of ``frac_derivative``."""
    return frac_derivative(f, T, t, ONE, options)


def _dense_expr(f: FnOnScale) -> ex.Expr | None:
    if isinstance(f, DeltaDerivativeFn):
        return f.dense_expr
    if isinstance(f, ExprFn):
        return f.expr
    return None


class DeltaDerivativeFn(FnOnScale):
    """``f^Delta`` as a function on ``T``.

    Right-scattered points use the forward quotient; dense points use the
    classical derivative of the symbolic form, which the delta derivative
    coincides with there.
    """

    def __init__(self, f: FnOnScale, T: TimeScale):
        self.f, self.T = f, T
        base = _dense_expr(f)
        self.dense_expr = ex.classical_derivative(base) if base is not None else None
        self.symbolic_hits = 0

    def __call__(self, s: Real) -> float:
        p = _kappa_point(self.T, s)
        sig = self.T.sigma(p)
        if sig > p:
            return self.f.increment(sig, p) / float(sig - p)
        if self.dense_expr is None:
            raise UnsupportedDensePath(
                f"iterated delta derivative at dense point {s} needs an expression-backed function"
            )
        self.symbolic_hits += 1
        return ex.evaluate(self.dense_expr, p)


def higher_frac_derivative(
    f,
    T: TimeScale,
    t: Real,
    order,
    options: LimitOptions = DEFAULT_OPTIONS,
) -> DerivResult:
    """Derivative of order ``beta = N + alpha``: ``alpha``-derivative of the
    ``N``-th delta derivative.  ``beta = 0`` returns ``f(t)`` itself."""
    f = as_fn(f)
    order = HigherOrder.of(order)
    chain: list[DeltaDerivativeFn] = []
    g = f
    for _ in range(order.n):
        g = DeltaDerivativeFn(g, T)
        chain.append(g)
    alpha = order.alpha
    p = T.snap(t)
    if alpha is None:
        value = g(p)
        if order.n == 0:
            method = Method.IdentityOrder
        elif any(d.symbolic_hits for d in chain):
            method = Method.SymbolicDelta
        else:
            method = Method.ClosedFormScattered
        return DerivResult(value, method, 0.0, 1)
    res = frac_derivative(g, T, p, alpha, options)
    if any(d.symbolic_hits for d in chain):
        res = replace(res, method=Method.SymbolicDelta)
    return res


def power_rule_derivative(
    m: int,
    c: Real,
    inverted: bool,
    T: TimeScale,
    t: Real,
    alpha,
) -> float:
    """Closed form for ``(t - c)**m`` (or ``(t - c)**-m`` when ``inverted``)
    at order ``alpha < 1``."""
    if m < 1:
        raise ValueError("m must be a positive integer")
    alpha = FractionalOrder.of(alpha)
    if alpha.is_one():
        raise ValueError("the power rule closed form needs alpha < 1")
    p = _kappa_point(T, t)
    sig = T.sigma(p)
    weight = real_power(float(sig - p), Fraction(1) - alpha.value)
    tc, sc = float(p - c), float(sig - c)
    if inverted:
        if tc * sc == 0.0:
            raise SingularPoint(f"(t-c)(sigma(t)-c) vanishes at t={t}, c={c}")
        total = sum(1.0 / (sc ** (m - nu) * tc ** (nu + 1)) for nu in range(m))
        return -weight * total
    total = sum(sc**nu * tc ** (m - 1 - nu) for nu in range(m))
    return weight * total


class _Composed(FnOnScale):
    def __init__(self, outer: FnOnScale, inner: FnOnScale):
        self.outer, self.inner = outer, inner

    def __call__(self, t: Real) -> float:
        return self.outer(self.inner(t))


def compose_fn(f: ExprFn, g: FnOnScale) -> FnOnScale:
    if g.expr is not None:
        return ExprFn(ex.compose(f.expr, g.expr))
    return _Composed(f, g)


def chain_rule_witness(
    f,
    g,
    T: TimeScale,
    t: Real,
    alpha,
    options: LimitOptions = DEFAULT_OPTIONS,
    tol: float = 1e-9,
) -> float:
    """A point ``c`` in ``[t, sigma(t)]`` with
    ``(f o g)^(alpha)(t) = f'(g(c)) * g^(alpha)(t)``.

    ``f`` must be expression-backed (its classical derivative is taken
    symbolically); ``g`` must be evaluable on ``[t, sigma(t)]``.
    """
    f = as_fn(f)
    if not isinstance(f, ExprFn):
        raise TypeError("the outer function must be expression-backed")
    g = as_fn(g)
    alpha = FractionalOrder.of(alpha)
    if alpha.is_one():
        raise ValueError("the chain rule witness is defined for alpha < 1")
    p = _kappa_point(T, t)
    lhs = frac_derivative(compose_fn(f, g), T, p, alpha, options)
    rhs = frac_derivative(g, T, p, alpha, options)
    if lhs.value == 0.0 and rhs.value == 0.0:
        return float(p)
    fprime = f.derivative()

    def h(c: float) -> float:
        return fprime(g(c)) * rhs.value - lhs.value

    bound = tol * max(1.0, abs(lhs.value))
    sig = T.sigma(p)
    if sig == p:
        slack = bound + 10.0 * (lhs.error_estimate + abs(fprime(g(p))) * rhs.error_estimate)
        if abs(h(float(p))) <= slack:
            return float(p)
        raise HypothesisViolated(f"no chain-rule witness at dense point t={t}: residual {h(float(p)):.3g}")

    a, b = float(p), float(sig)
    grid = np.linspace(a, b, 257)
    values = [h(c) for c in grid]
    for c, v in zip(grid, values):
        if v == 0.0:
            return float(c)
    for i in range(len(grid) - 1):
        if values[i] * values[i + 1] < 0.0:
            c = brentq(h, grid[i], grid[i + 1], xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)
            if abs(h(c)) <= bound:
                return float(c)
    best = min(range(len(grid)), key=lambda i: abs(values[i]))
    if abs(values[best]) <= bound:
        return float(grid[best])
    raise HypothesisViolated(
        f"h(c) = f'(g(c)) g^(alpha)(t) - (f o g)^(alpha)(t) has no root on [{a}, {b}]"
    )
