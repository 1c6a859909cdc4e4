import math
from fractions import Fraction as F

import pytest

from chronofrac.errors import OutsideWindow, WindowEmpty
from chronofrac.functions import constant, fn
from chronofrac.integral import (
    cauchy_frac_integral,
    delta_antiderivative,
    delta_integral,
    frac_indefinite_integral,
)
from chronofrac.quadrature import adaptive_simpson
from chronofrac.timescale import CantorApprox, FiniteUnion, Reals, UniformGrid

Z = UniformGrid(1)
R = Reals()
BETAS = [F(0), F(1, 4), F(1, 3), F(1, 2), F(2, 3), F(1)]


def test_adaptive_simpson():
    assert adaptive_simpson(math.sin, 0, math.pi) == pytest.approx(2, abs=1e-10)
    assert adaptive_simpson(math.exp, 1, 0) == pytest.approx(-(math.e - 1), abs=1e-10)
    assert adaptive_simpson(lambda x: x**3, -1, 2) == pytest.approx(15 / 4, abs=1e-12)
    assert adaptive_simpson(math.sqrt, 0, 1) == pytest.approx(2 / 3, abs=1e-9)


def test_antiderivative_on_integers():
    F_ = delta_antiderivative(fn("t"), Z, (-10, 10), 0)
    for t in range(-10, 11):
        assert F_(t) == t * (t - 1) / 2
    for t in range(-10, 10):
        assert F_(t + 1) - F_(t) == t


def test_antiderivative_on_reals_and_grids():
    F_ = delta_antiderivative(fn("t"), R, (-2, 3), 0)
    for t in [-2, -0.5, 0, 1.25, 3]:
        assert F_(t) == pytest.approx(t * t / 2, abs=1e-10)
    h = F(1, 4)
    G = delta_antiderivative(constant(1), UniformGrid(h), (-3, 3), 0)
    for k in range(-12, 13):
        assert G(k * h) == pytest.approx(float(k * h), abs=1e-14)


def test_antiderivative_on_mixed_scale():
    T = FiniteUnion([(0, 1), (F(3, 2), F(3, 2)), (2, 3)])
    F_ = delta_antiderivative(fn("t^2"), T)
    assert F_(1) == pytest.approx(1 / 3, abs=1e-12)
    assert F_(F(3, 2)) - F_(1) == pytest.approx(0.5 * 1, abs=1e-14)
    assert F_(2) - F_(F(3, 2)) == pytest.approx(0.5 * 2.25, abs=1e-14)
    assert F_(3) == pytest.approx(delta_integral(fn("t^2"), T, 0, 3), abs=1e-12)


def test_window_errors():
    with pytest.raises(ValueError):
        delta_antiderivative(fn("t"), R)
    with pytest.raises(WindowEmpty):
        delta_antiderivative(fn("t"), FiniteUnion([(0, 1), (5, 6)]), (2, 4))
    F_ = delta_antiderivative(fn("t"), Z, (0, 5))
    assert F_(6) == 15  # sigma of the window top is still reachable
    with pytest.raises(OutsideWindow):
        F_(7)


@pytest.mark.parametrize("beta", BETAS)
def test_indefinite_on_integers(beta):
    Fb = frac_indefinite_integral(fn("t"), Z, beta, (-5, 15), 0)
    for t in range(-4, 12):
        expected = t if beta < 1 else t * (t - 1) / 2
        assert Fb(t) == expected


def test_order_zero_returns_the_function():
    Fb = frac_indefinite_integral(fn("t^2 + 1"), Z, 0, (0, 10))
    assert [Fb(t) for t in range(9)] == [t * t + 1 for t in range(9)]


@pytest.mark.parametrize("beta", [F(0), F(1, 4), F(1, 3), F(1, 2)])
def test_cauchy_example(beta):
    assert cauchy_frac_integral(fn("t"), Z, 1, 10, beta) == 9


def test_cauchy_order_one_is_the_delta_integral():
    assert cauchy_frac_integral(fn("t"), Z, 1, 10, 1) == sum(range(1, 10))


@pytest.mark.parametrize("beta", BETAS)
def test_empty_interval(beta):
    assert cauchy_frac_integral(fn("t^2"), R, 3, 3, beta) == 0
    assert cauchy_frac_integral(fn("t"), Z, 3, 3, beta) == 0


@pytest.mark.parametrize("h", [F(1, 8), F(1, 2), F(3)])
@pytest.mark.parametrize("beta", [F(0), F(1, 4), F(1, 2), F(2, 3)])
def test_grid_closed_form(h, beta):
    value = cauchy_frac_integral(fn("t"), UniformGrid(h), 0, 5 * h, beta)
    assert value == pytest.approx(float(5 * h) * float(h) ** float(beta), rel=1e-12)


def test_fractional_integral_on_reals_vanishes():
    assert abs(cauchy_frac_integral(fn("t^2"), R, 0, 1, F(1, 2))) < 1e-8
    assert cauchy_frac_integral(fn("t^2"), R, 0, 1, 1) == pytest.approx(1 / 3, abs=1e-10)


def test_cantor_delta_integral_matches_independent_sum():
    T = CantorApprox(3)
    value = cauchy_frac_integral(fn("t"), T, 0, 1, 1)
    assert value == pytest.approx(delta_integral(fn("t"), T, 0, 1), abs=1e-12)


@pytest.mark.parametrize("t0", [0, 2, 7])
def test_anchor_shift(t0):
    T = FiniteUnion([(0, 1), (2, 2), (3, 5), (7, 7)])
    base = cauchy_frac_integral(fn("t^2 - t"), T, F(1, 2), 5, F(1, 3), (0, 7), 0)
    moved = cauchy_frac_integral(fn("t^2 - t"), T, F(1, 2), 5, F(1, 3), (0, 7), t0)
    assert abs(base - moved) <= 1e-12
