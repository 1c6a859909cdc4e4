"""Acceptance criteria, one test each.

Every criterion prints a single ``PASS``/``FAIL`` line (collected into the
pytest terminal summary, or printed directly when this file is run as a
script).  Criterion 1 at ``beta = 1`` is expected to fail: the order-1 Cauchy
integral of ``t`` over ``[1, 10]`` on the integers is the delta integral
``1 + 2 + ... + 9 = 45``, not 9.
"""

from __future__ import annotations

import math
import random
import sys
import time
from fractions import Fraction as F

import pytest

from chronofrac import expr as ex
from chronofrac.fracderiv import chain_rule_witness, frac_derivative, higher_frac_derivative
from chronofrac.functions import ExprFn, fn
from chronofrac.integral import cauchy_frac_integral, default_window
from chronofrac.laws import DEFAULT_SCALES, run_randomized_suite, sample_point
from chronofrac.serialize import dumps
from chronofrac.timescale import CantorApprox, Reals, UniformGrid, parse_scale

RESULTS: dict[int, str] = {}

SMOOTH_POOL = (
    "t^2", "t^3 - 2*t", "sin(t)", "exp(t/2)", "cos(2*t) + t", "1/(t^2 + 1)",
    "(t - 1)^4/8", "t*exp(-t^2/4)", "sin(t)^2 + 3",
)


def record(n: int, ok: bool, detail: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {n}: {detail}"
    RESULTS[n] = line
    print(line)


# ------------------------------------------------------------------ criteria


def criterion_1():
    start = time.perf_counter()
    values = {}
    for beta in (F(0), F(1, 4), F(1, 3), F(1, 2), F(1)):
        values[str(beta)] = cauchy_frac_integral(fn("t"), UniformGrid(1), 1, 10, beta)
    elapsed = time.perf_counter() - start
    bad = {b: v for b, v in values.items() if abs(v - 9) > 1e-12}
    ok = not bad and elapsed < 0.1
    detail = f"values {values}, {elapsed * 1e3:.1f} ms" + (f"; off by more than 1e-12: {bad}" if bad else "")
    return ok, detail, values


def criterion_2():
    worst, values = 0.0, {}
    for h in (F(1, 2), F(1), F(2)):
        for t in (0, 3 * h):
            v = higher_frac_derivative(fn("t^2"), UniformGrid(h), t, "1.3").value
            expected = 2 * float(h) ** 0.7
            worst = max(worst, abs(v - expected) / expected)
            values[f"h={h},t={t}"] = v
    return worst <= 1e-12, f"max relative error {worst:.2e}", values


def criterion_3():
    values = {str(a): chain_rule_witness(fn("t^2"), fn("2*t"), UniformGrid(1), 4, a) for a in ("1/3", "1/2")}
    worst = max(abs(c - 4.5) for c in values.values())
    return worst <= 1e-9, f"c = {values}, max error {worst:.2e}", values


def criterion_4():
    worst, values = 0.0, {}
    for d in (2, 3, 5, 8):
        for alpha in (F(1, 3), F(1, 2), F(1)):
            v = frac_derivative(fn("t"), CantorApprox(d), F(1, 3), alpha).value
            expected = (1 / 3) ** float(1 - alpha)
            worst = max(worst, abs(v - expected))
            values[f"d={d},alpha={alpha}"] = v
    return worst <= 1e-12, f"max error {worst:.2e}", values


def criterion_5():
    start = time.perf_counter()
    res = frac_derivative(fn("t^(1/3)"), Reals(), 0, "1/3")
    elapsed = time.perf_counter() - start
    err = abs(res.value - 1)
    ok = err <= 1e-6 and elapsed < 1
    return ok, f"value {res.value!r} ({res.method.value}), error {err:.2e}, {elapsed * 1e3:.1f} ms", res.value


def criterion_6():
    start = time.perf_counter()
    reports = run_randomized_suite(seed=1, n_cases=200)
    elapsed = time.perf_counter() - start
    failed = [r.law_id for r in reports if not r.passed]
    worst = {
        regime: max((r.max_residual for r in reports if r.law_id.endswith(f"[{regime}]")), default=0.0)
        for regime in ("scattered", "dense")
    }
    ok = not failed and elapsed < 30
    detail = (
        f"{len(reports)} reports, worst scattered {worst['scattered']:.2e}, "
        f"worst dense {worst['dense']:.2e}, {elapsed:.1f} s"
        + (f"; failed {failed}" if failed else "")
    )
    return ok, detail, [r.as_dict() for r in reports]


def _order_one_case(rng: random.Random):
    e = rng.choice(SMOOTH_POOL)
    f = fn(e)
    if rng.random() < 0.5:
        t = rng.randint(-96, 96) / 32
        d = frac_derivative(f, Reals(), t, 1).value
        step = 1e-4 * max(1.0, abs(t))
        central = (f(t + step) - f(t - step)) / (2 * step)
        return "R", abs(d - central) / max(1.0, abs(central)) <= 1e-5
    h = rng.choice((F(1, 4), F(1, 3), F(1, 2), F(1), F(2)))
    t = rng.randint(-12, 12) * h
    d = frac_derivative(f, UniformGrid(h), t, 1).value
    forward = (f(float(t + h)) - f(float(t))) / float(h)
    return "hZ", d == forward


def criterion_7():
    rng = random.Random(7)
    misses = {"R": 0, "hZ": 0}
    for _ in range(100):
        kind, ok = _order_one_case(rng)
        misses[kind] += not ok
    ok = not any(misses.values())
    return ok, f"100 cases, mismatches {misses}", misses


def _window_point(T, window, rng):
    segs = T.segments(*window)
    a, b = rng.choice(segs)
    return a if a == b else a + (b - a) * F(rng.randint(0, 8), 8)


def criterion_8():
    rng = random.Random(8)
    scales = [parse_scale(s) for s in DEFAULT_SCALES]
    worst = 0.0
    for _ in range(50):
        T = rng.choice(scales)
        a, b = sample_point(T, rng), sample_point(T, rng)
        beta = rng.choice((F(0), F(1, 4), F(1, 3), F(1, 2), F(2, 3), F(1)))
        f = ExprFn(rng.choice(SMOOTH_POOL))
        window = default_window(T, a, b)
        base = cauchy_frac_integral(f, T, a, b, beta, window)
        moved = cauchy_frac_integral(f, T, a, b, beta, window, _window_point(T, window, rng))
        worst = max(worst, abs(base - moved))
    return worst <= 1e-12, f"50 cases, max change {worst:.2e}", worst


CRITERIA = {1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4,
            5: criterion_5, 6: criterion_6, 7: criterion_7, 8: criterion_8}
_PAYLOADS: dict[int, str] = {}


def _run(n: int) -> tuple[bool, str]:
    ok, detail, payload = CRITERIA[n]()
    _PAYLOADS.setdefault(n, dumps(payload))
    return ok, detail


def criterion_9():
    first = {}
    for n in range(1, 7):
        if n not in _PAYLOADS:
            _run(n)
        first[n] = _PAYLOADS[n]
    second = {n: dumps(CRITERIA[n]()[2]) for n in range(1, 7)}
    differing = [n for n in first if first[n] != second[n]]
    total = sum(len(s) for s in second.values())
    return not differing, f"{total} bytes compared" + (f"; differs in {differing}" if differing else ""), None


# --------------------------------------------------------------------- tests


@pytest.mark.parametrize("n", sorted(CRITERIA))
def test_criterion(n):
    ok, detail = _run(n)
    record(n, ok, detail)
    assert ok, detail


def test_criterion_9_determinism():
    ok, detail, _ = criterion_9()
    record(9, ok, detail)
    assert ok, detail


if __name__ == "__main__":
    for n in sorted(CRITERIA):
        record(n, *_run(n))
    ok, detail, _ = criterion_9()
    record(9, ok, detail)
    sys.exit(0 if all(line.startswith("[PASS]") for line in RESULTS.values()) else 1)
