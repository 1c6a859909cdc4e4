"""Delta antiderivatives and fractional integrals of order ``beta`` in ``[0, 1]``.

The indefinite fractional integral of order ``beta`` is the derivative of
order ``1 - beta`` of a delta antiderivative ``F``; the Cauchy integral over
``[a, b]`` is the difference of that function at the two end points.  With
``beta = 1`` this is the ordinary delta integral and with ``beta = 0`` it
returns ``f`` itself.

On the real line every ``0 < beta < 1`` integral of a bounded function is 0,
because the difference quotient of ``F`` carries a factor ``(t - s)**beta``.
This is what the definition gives; it is not special-cased.
"""

from __future__ import annotations

from bisect import bisect_right
from fractions import Fraction

from .errors import OutsideWindow, PointNotInScale, WindowEmpty
from .fracderiv import frac_derivative
from .functions import FnOnScale, as_fn
from .limits import DEFAULT_OPTIONS, DerivResult, LimitOptions, Method
from .orders import FractionalOrder, to_fraction
from .quadrature import adaptive_simpson
from .timescale import Real, TimeScale, as_exact

QUAD_TOL = 1e-10


class Antiderivative(FnOnScale):
    """``F`` with ``F^Delta = f`` on ``T ∩ window``, anchored by ``F(t0) = 0``.

    Scattered steps add ``mu(t) f(t)``; dense segments are integrated with
    adaptive Simpson.  ``F`` is also defined at ``sigma(w_hi)`` when the top
    of the window is right-scattered, since that value only needs
    ``f(w_hi)``.
    """

    def __init__(self, f, T: TimeScale, window: tuple[Real, Real] | None = None, t0: Real | None = None):
        self.f = as_fn(f)
        self.T = T
        if window is None:
            if T.min is None or T.max is None:
                raise ValueError(f"scale {T} is unbounded; pass an explicit window")
            window = (T.min, T.max)
        lo, hi = as_exact(window[0]), as_exact(window[1])
        self.window = (lo, hi)
        segs = T.segments(lo, hi)
        if not segs:
            raise WindowEmpty(f"no points of {T} in [{lo}, {hi}]")
        self._starts = [a for a, _ in segs]
        self._ends = [b for _, b in segs]
        self._raw_start: list[float] = []
        self._raw_end: list[float] = []
        self._steps: list[float | None] = []
        self._cache: dict[tuple[int, Real], float] = {}
        raw = 0.0
        for a, b in segs:
            self._raw_start.append(raw)
            if b > a:
                raw = raw + self._quad(a, b)
            self._raw_end.append(raw)
            nxt = T.sigma(b)
            if nxt > b:
                step = float(nxt - b) * self.f(b)
                self._steps.append(step)
                raw = raw + step
            else:
                self._steps.append(None)
        last = self._ends[-1]
        self._beyond = T.sigma(last) if self._steps[-1] is not None else None
        self._raw_beyond = raw
        if t0 is None:
            t0 = self._starts[0]
        self.t0 = T.snap(t0)
        self._offset = self.raw(self.t0)

    def _quad(self, a: Real, b: Real) -> float:
        return adaptive_simpson(self.f, float(a), float(b), QUAD_TOL)

    def _locate(self, t: Real) -> tuple[Real, int]:
        """Snap ``t`` and return ``(point, segment index)``; index ``-1`` is
        the extra point ``sigma(w_hi)``."""
        p = self.T.snap(t)
        i = bisect_right(self._starts, p) - 1
        if i >= 0 and p <= self._ends[i]:
            return p, i
        if self._beyond is not None and p == self._beyond:
            return p, -1
        raise OutsideWindow(f"t={t} lies outside the window {self.window}")

    def raw(self, t: Real) -> float:
        """Unanchored value, accumulated from the bottom of the window."""
        p, i = self._locate(t)
        return self._raw_at(p, i)

    def _raw_at(self, p: Real, i: int) -> float:
        if i == -1:
            return self._raw_beyond
        if p == self._starts[i]:
            return self._raw_start[i]
        if p == self._ends[i]:
            return self._raw_end[i]
        key = (i, p)
        if key not in self._cache:
            self._cache[key] = self._raw_start[i] + self._quad(self._starts[i], p)
        return self._cache[key]

    def __call__(self, t: Real) -> float:
        return self.raw(t) - self._offset

    def increment(self, a: Real, b: Real) -> float:
        """``F(a) - F(b)`` computed without the anchor: directly by quadrature
        inside one dense segment and as the stored step across one jump."""
        pa, ia = self._locate(a)
        pb, ib = self._locate(b)
        if pa == pb:
            return 0.0
        if ia == ib and ia != -1:
            return self._quad(pb, pa)
        for (hi_p, hi_i), (lo_p, lo_i), sign in (((pa, ia), (pb, ib), 1.0), ((pb, ib), (pa, ia), -1.0)):
            if lo_i != -1 and lo_p == self._ends[lo_i] and self._steps[lo_i] is not None:
                succ_i = lo_i + 1 if lo_i + 1 < len(self._starts) else -1
                if hi_i == succ_i and (succ_i == -1 or hi_p == self._starts[succ_i]):
                    return sign * self._steps[lo_i]
        return self._raw_at(pa, ia) - self._raw_at(pb, ib)


def delta_antiderivative(f, T: TimeScale, window: tuple[Real, Real] | None = None, t0: Real | None = None) -> Antiderivative:
    """Build ``F`` with ``F^Delta = f`` on the window, ``F(t0) = 0``.

    ``t0`` defaults to the bottom of the window.  Unbounded scales need an
    explicit window.
    """
    return Antiderivative(f, T, window, t0)


def _as_beta(beta) -> Fraction:
    b = to_fraction(beta)
    if not 0 <= b <= 1:
        raise ValueError(f"integration order must lie in [0, 1], got {b}")
    return b


class FracIntegralFn(FnOnScale):
    """``F^beta = F^(1 - beta)`` for a delta antiderivative ``F``."""

    def __init__(self, beta, antiderivative: Antiderivative, options: LimitOptions = DEFAULT_OPTIONS):
        self.beta = _as_beta(beta)
        self.F = antiderivative
        self.options = options

    @property
    def T(self) -> TimeScale:
        return self.F.T

    def evaluate(self, t: Real) -> DerivResult:
        if self.beta == 1:
            return DerivResult(self.F(t), Method.IdentityOrder)
        order = FractionalOrder.of(1 - self.beta)
        return frac_derivative(self.F, self.F.T, t, order, self.options)

    def __call__(self, t: Real) -> float:
        return self.evaluate(t).value


def frac_indefinite_integral(
    f,
    T: TimeScale,
    beta,
    window: tuple[Real, Real] | None = None,
    t0: Real | None = None,
    options: LimitOptions = DEFAULT_OPTIONS,
) -> FracIntegralFn:
    """Indefinite fractional integral of order ``beta`` as a function on ``T``."""
    beta = _as_beta(beta)
    return FracIntegralFn(beta, delta_antiderivative(f, T, window, t0), options)


def default_window(T: TimeScale, a: Real, b: Real) -> tuple[Real, Real]:
    """``[min(a,b), max(a,b)]`` padded on both sides by
    ``max(|a|, |b|, 1) / 8``, which covers the limit engine's first sample."""
    lo, hi = min(a, b), max(a, b)
    pad = Fraction(max(abs(as_exact(lo)), abs(as_exact(hi)), 1)) / 8
    return lo - pad, hi + pad


def cauchy_frac_integral(
    f,
    T: TimeScale,
    a: Real,
    b: Real,
    beta,
    window: tuple[Real, Real] | None = None,
    t0: Real | None = None,
    options: LimitOptions = DEFAULT_OPTIONS,
) -> float:
    """``F^beta(b) - F^beta(a)``.

    When no window is given one is derived from ``a`` and ``b`` (see
    ``default_window``).
    """
    pa, pb = T.snap(a), T.snap(b)
    beta = _as_beta(beta)
    if window is None:
        window = default_window(T, pa, pb)
    lo, hi = as_exact(window[0]), as_exact(window[1])
    for p in (pa, pb):
        if not lo <= p <= hi:
            raise PointNotInScale(p, f"{T} ∩ [{lo}, {hi}]")
    if pa == pb:
        return 0.0
    Fb = frac_indefinite_integral(as_fn(f), T, beta, (lo, hi), t0, options)
    if beta == 1:
        return Fb.F.increment(pb, pa)
    return Fb(pb) - Fb(pa)


def delta_integral(f, T: TimeScale, a: Real, b: Real) -> float:
    """Plain delta integral over ``[a, b)``: ``sum mu f`` over scattered
    points plus quadrature over dense pieces, computed independently of
    ``Antiderivative``."""
    pa, pb = T.snap(a), T.snap(b)
    sign = 1.0
    if pb < pa:
        pa, pb, sign = pb, pa, -1.0
    f = as_fn(f)
    total = 0.0
    for lo, hi in T.segments(pa, pb):
        if hi > lo:
            total += adaptive_simpson(f, float(lo), float(hi), QUAD_TOL)
        if hi < pb:
            total += float(T.sigma(hi) - hi) * f(hi)
    return sign * total
