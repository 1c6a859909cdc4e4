import math
from fractions import Fraction as F

import pytest

from chronofrac.errors import Divergent, NoApproach, NotInKappa, SingularPoint, TablePointMissing
from chronofrac.fracderiv import (
    chain_rule_witness,
    delta_derivative,
    frac_derivative,
    higher_frac_derivative,
    power_rule_derivative,
)
from chronofrac.functions import TableFn, constant, fn
from chronofrac.limits import DEFAULT_OPTIONS, Method, limit_quotient
from chronofrac.orders import FractionalOrder, rpow
from chronofrac.timescale import CantorApprox, FiniteUnion, Reals, UniformGrid

Z = UniformGrid(1)
R = Reals()


def test_scattered_closed_form():
    res = frac_derivative(fn("t^2"), Z, 4, "1/2")
    assert res.value == 9
    assert res.method is Method.ClosedFormScattered
    assert res.error_estimate == 0


@pytest.mark.parametrize(
    "T, t",
    [(Z, 0), (R, F(1, 2)), (CantorApprox(3), F(1, 54)), (CantorApprox(3), F(1, 3)),
     (FiniteUnion([(0, 1), (2, 2), (3, 4)]), 1)],
)
@pytest.mark.parametrize("alpha", ["1/3", "1/2", "1"])
def test_constant_has_zero_derivative(T, t, alpha):
    assert frac_derivative(constant(7), T, t, alpha).value == 0


@pytest.mark.parametrize("alpha", [F(1, 3), F(1, 2), F(1)])
def test_identity_on_cantor(alpha):
    res = frac_derivative(fn("t"), CantorApprox(4), F(1, 3), alpha)
    assert res.value == pytest.approx(float(F(1, 3)) ** float(1 - alpha), rel=1e-12)


def test_kolwankar_gangal_limit():
    res = frac_derivative(fn("t^(1/3)"), R, 0, "1/3")
    assert res.method is Method.TwoSidedLimit
    assert abs(res.value - 1) <= 1e-6


def test_limit_quotient_oracle_and_zero():
    third = FractionalOrder(1, 3)

    def numerator(s):
        return 0 - rpow(float(s), third)

    # the quotient is identically 1 at s = +-4^-j
    for j in range(1, 21):
        for s in (4.0**-j, -(4.0**-j)):
            assert numerator(s) / rpow(0 - s, third) == pytest.approx(1, rel=1e-14)
    assert limit_quotient(R, 0, numerator, third).value == pytest.approx(1, abs=1e-6)
    assert limit_quotient(R, 2, lambda s: 0.0, third).value == 0


def test_single_left_sample_diverges_but_derivative_refuses():
    T = FiniteUnion([(0, 0), (1, 2)])
    half = FractionalOrder(1, 2)
    with pytest.raises(Divergent):
        limit_quotient(T, 1, lambda s: 1.0 - float(s), half)
    with pytest.raises(NoApproach):
        frac_derivative(fn("t"), T, 1, half)


def test_right_dense_only_point_uses_right_side_for_odd_orders():
    T = FiniteUnion([(0, 0), (1, 2)])
    res = frac_derivative(fn("t"), T, 1, 1)
    assert res.value == pytest.approx(1, abs=1e-9)


def test_not_in_kappa():
    with pytest.raises(NotInKappa):
        frac_derivative(fn("t"), FiniteUnion([(0, 1), (2, 2)]), 2, "1/2")


def test_left_limit_for_even_denominator():
    # for alpha < 1 the derivative of a smooth function vanishes at dense points
    res = frac_derivative(fn("sin(t)"), R, 1, "1/2")
    assert res.method is Method.LeftLimit
    assert abs(res.value) < 1e-8


def test_delta_derivative():
    assert delta_derivative(fn("t^2"), Z, 4).value == 9
    assert delta_derivative(fn("t^2"), R, 3).value == pytest.approx(6, abs=1e-6)
    for T, t in [(Z, 3), (R, 0.5), (CantorApprox(3), F(1, 3)), (UniformGrid(F(1, 4)), 1)]:
        assert delta_derivative(fn("t"), T, t).value == pytest.approx(1, abs=1e-9)


@pytest.mark.parametrize("h", [F(1, 2), F(1), F(2)])
@pytest.mark.parametrize("k", [0, 3])
def test_higher_order_example(h, k):
    T = UniformGrid(h)
    res = higher_frac_derivative(fn("t^2"), T, k * h, "1.3")
    assert res.value == pytest.approx(2 * float(h) ** 0.7, rel=1e-12)


def test_higher_order_misc():
    for beta in ["0.5", "1", "1.3", "2", "2.75"]:
        assert higher_frac_derivative(constant(3), Z, 2, beta).value == 0
    for t in range(-3, 4):
        assert higher_frac_derivative(fn("t^2"), Z, t, 1).value == 2 * t + 1
    assert higher_frac_derivative(fn("t^2"), Z, 5, 0).value == 25
    res = higher_frac_derivative(fn("t^3"), R, 2, "1.2")
    assert res.method is Method.SymbolicDelta


def test_power_rule_examples():
    assert power_rule_derivative(2, 0, False, Z, 4, "1/2") == pytest.approx(9, rel=1e-15)
    assert power_rule_derivative(1, 0, True, Z, 2, "1/2") == pytest.approx(-1 / 6, rel=1e-15)
    assert power_rule_derivative(3, 0, False, R, 1.7, "1/3") == 0
    with pytest.raises(SingularPoint):
        power_rule_derivative(1, 2, True, Z, 2, "1/2")


@pytest.mark.parametrize("m", [1, 2, 3, 4, 5])
@pytest.mark.parametrize("inverted", [False, True])
def test_power_rule_matches_definition(m, inverted):
    T, t, c, alpha = UniformGrid(F(1, 3)), F(4, 3), F(-1, 2), "2/3"
    text = f"(t - ({c}))^{m}" if not inverted else f"1/(t - ({c}))^{m}"
    direct = frac_derivative(fn(text), T, t, alpha).value
    assert power_rule_derivative(m, c, inverted, T, t, alpha) == pytest.approx(direct, rel=1e-12)


def test_chain_rule_witness():
    for alpha in ["1/3", "1/2"]:
        assert chain_rule_witness(fn("t^2"), fn("2*t"), Z, 4, alpha) == pytest.approx(4.5, abs=1e-9)
    assert chain_rule_witness(fn("t^2"), constant(5), Z, 4, "1/2") == 4
    c = chain_rule_witness(fn("t^3"), fn("t"), Z, 1, "1/2")
    assert c == pytest.approx(math.sqrt(7 / 3), abs=1e-9)
    assert 1 <= c <= 2


def test_table_function_needs_its_points():
    f = TableFn({0: 1.0, F(1, 2): 2.0, F(17, 10): 4.0})
    T = f.scale()
    assert frac_derivative(f, T, F(1, 2), 1).value == pytest.approx(2 / 1.2, rel=1e-15)
    with pytest.raises(TablePointMissing):
        frac_derivative(f, Z, 0, 1)


def test_tolerance_override(monkeypatch):
    from chronofrac.limits import LimitOptions

    monkeypatch.setenv("CHRONOFRAC_TOL", "1e-6")
    opts = LimitOptions.from_env()
    assert opts.tol == 1e-6
    loose = frac_derivative(fn("exp(t)"), R, 0, 1, opts)
    tight = frac_derivative(fn("exp(t)"), R, 0, 1, DEFAULT_OPTIONS)
    assert loose.samples_used <= tight.samples_used
    assert loose.value == pytest.approx(1, abs=1e-6)
