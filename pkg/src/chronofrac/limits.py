"""Numeric limit engine for power-law difference quotients.

At a right-dense point the local fractional derivative is the limit of

    q(s) = N(s) / (t - s)**alpha,        s -> t,

over scale points ``s``.  For smooth numerators ``q`` expands in powers
``|t - s|**(k - alpha)``, ``k = 1, 2, ...``, so a Richardson table with those
exponents removes the leading terms on the geometric approach mesh.  The
diagonal of the table is accepted once three successive differences fall
below ``tol * max(1, |value|)``.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, replace
from enum import Enum
from typing import Callable, Iterable, Literal

from .errors import Divergent, NoApproach
from .orders import FractionalOrder, rpow
from .timescale import Real, TimeScale, default_delta0, iter_approach_points


class Method(str, Enum):
    ClosedFormScattered = "ClosedFormScattered"
    TwoSidedLimit = "TwoSidedLimit"
    LeftLimit = "LeftLimit"
    SymbolicDelta = "SymbolicDelta"
    IdentityOrder = "IdentityOrder"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class DerivResult:
    value: float
    method: Method
    error_estimate: float = 0.0
    samples_used: int = 0

    def __float__(self) -> float:
        return self.value


@dataclass(frozen=True)
class LimitOptions:
    """Tuning of the limit engine.  ``delta0=None`` means
    ``max(|t|, 1) / 16``."""

    delta0: float | None = None
    ratio: float = 0.5
    max_samples: int = 64
    tol: float = 1e-9
    levels: int = 4
    consecutive: int = 3

    @classmethod
    def from_env(cls) -> LimitOptions:
        raw = os.environ.get("CHRONOFRAC_TOL")
        return cls(tol=float(raw)) if raw else cls()

    def with_tol(self, tol: float) -> LimitOptions:
        return replace(self, tol=tol)


DEFAULT_OPTIONS = LimitOptions()


def _exponents(alpha: FractionalOrder, levels: int) -> list[float]:
    a = float(alpha)
    out = []
    k = 1
    while len(out) < levels:
        g = k - a
        if g > 1e-12:
            out.append(g)
        k += 1
    return out


@dataclass
class _OneSided:
    value: float
    error: float
    samples: int


def _extrapolate(
    samples: Iterable[tuple[float, float]],
    alpha: FractionalOrder,
    opts: LimitOptions,
) -> _OneSided:
    """Run the Richardson table over ``(distance, quotient)`` pairs, pulling
    them lazily so that no sample past convergence is evaluated."""
    gammas = _exponents(alpha, opts.levels)
    rows: list[list[float]] = []
    diag: list[float] = []
    streak = 0
    last_diff = math.inf
    prev_d = math.nan
    n = 0
    for j, (d, q) in enumerate(samples):
        n = j + 1
        row = [q]
        for k in range(1, min(j, opts.levels) + 1):
            prev_row = rows[j - 1]
            if k - 1 >= len(prev_row):
                break
            r = (prev_d / d) ** gammas[k - 1]
            if r <= 1.0 + 1e-15:
                break
            row.append(row[k - 1] + (row[k - 1] - prev_row[k - 1]) / (r - 1.0))
        rows.append(row)
        prev_d = d
        est = row[-1]
        if not math.isfinite(est):
            streak = 0
            diag.append(est)
            continue
        if diag and math.isfinite(diag[-1]):
            last_diff = abs(est - diag[-1])
            if last_diff <= opts.tol * max(1.0, abs(est)):
                streak += 1
            else:
                streak = 0
        diag.append(est)
        if streak >= opts.consecutive:
            return _OneSided(est, last_diff, j + 1)
    if n == 0:
        raise NoApproach("no approach samples")
    raise Divergent(
        f"limit quotient did not converge after {n} samples "
        f"(last change {last_diff:.3g})"
    )


def _sample(T, t, side, numerator, alpha, opts) -> Iterable[tuple[float, float]]:
    for s in iter_approach_points(T, t, side, opts.max_samples, opts.delta0, opts.ratio):
        diff = t - s
        yield abs(float(diff)), numerator(s) / rpow(float(diff), alpha)


def one_sided_limit(
    T: TimeScale,
    t: Real,
    numerator: Callable[[Real], float],
    alpha: FractionalOrder,
    side: Literal["left", "right"],
    options: LimitOptions = DEFAULT_OPTIONS,
) -> DerivResult:
    """Limit of ``numerator(s) / rpow(t - s, alpha)`` as ``s`` approaches
    ``t`` from one side.  Raises NoApproach if no scale point lies on that
    side and Divergent if the extrapolated sequence never settles."""
    p = T.snap(t)
    opts = options if options.delta0 is not None else replace(options, delta0=default_delta0(p))
    try:
        res = _extrapolate(_sample(T, p, side, numerator, alpha, opts), alpha, opts)
    except NoApproach:
        raise NoApproach(f"no scale points approach t={t} from the {side}") from None
    method = Method.LeftLimit if side == "left" else Method.TwoSidedLimit
    return DerivResult(res.value, method, res.error, res.samples)


def limit_quotient(
    T: TimeScale,
    t: Real,
    numerator: Callable[[Real], float],
    alpha: FractionalOrder,
    options: LimitOptions = DEFAULT_OPTIONS,
) -> DerivResult:
    """Limit of ``numerator(s) / (t - s)**alpha`` at a dense point ``t``.

    Odd-reciprocal orders take the two-sided limit; every other order only
    makes sense from the left.  In the two-sided case a side on which ``t``
    is scattered contributes nothing (the shrinking neighbourhood holds no
    points there), and the remaining side alone decides.  Both sides present
    must converge and agree within the tolerance.
    """
    p = T.snap(t)
    alpha = FractionalOrder.of(alpha)
    if not alpha.odd_reciprocal():
        return one_sided_limit(T, p, numerator, alpha, "left", options)

    cls = T.classify(p)
    sides = []
    if cls.left_dense:
        sides.append("left")
    if cls.right_dense:
        sides.append("right")
    if not sides:
        raise NoApproach(f"t={t} is not approached by scale points from either side")
    results = [one_sided_limit(T, p, numerator, alpha, s, options) for s in sides]
    if len(results) == 1:
        r = results[0]
        return DerivResult(r.value, Method.TwoSidedLimit, r.error_estimate, r.samples_used)
    left, right = results
    gap = abs(left.value - right.value)
    scale = max(1.0, abs(left.value), abs(right.value))
    if gap > options.tol * scale:
        raise Divergent(
            f"one-sided limits disagree at t={t}: left {left.value!r}, right {right.value!r}"
        )
    return DerivResult(
        0.5 * (left.value + right.value),
        Method.TwoSidedLimit,
        max(left.error_estimate, right.error_estimate, 0.5 * gap),
        left.samples_used + right.samples_used,
    )
