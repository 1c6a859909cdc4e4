"""Fractional derivatives at scattered and dense points."""

from fractions import Fraction as F

import numpy as np

from chronofrac import CantorApprox, Reals, UniformGrid, fn, frac_derivative, higher_frac_derivative
from chronofrac import chain_rule_witness, power_rule_derivative

Z = UniformGrid(1)
square = fn("t^2")

# %% At a right-scattered point the derivative is a closed form:
# (f(sigma(t)) - f(t)) / mu(t)^alpha.  On Z with t = 4 that is 25 - 16.
for alpha in ("1/3", "1/2", "1"):
    res = frac_derivative(square, Z, 4, alpha)
    print(f"alpha={alpha:>3}: {res.value} via {res.method}")

# the power rule closed form agrees
print("power rule:", power_rule_derivative(2, 0, False, Z, 4, "1/2"))

# %% Shrinking the grid step: the order-1/2 derivative of t^2 at t = 1 is
# mu^(1/2) (2t + mu), which tends to 0, while order 1 tends to 2t
for h in (F(1), F(1, 4), F(1, 16), F(1, 64)):
    T = UniformGrid(h)
    half = frac_derivative(square, T, 1, "1/2").value
    one = frac_derivative(square, T, 1, 1).value
    print(f"h={h!s:>5}  order 1/2: {half:.6f}  order 1: {one:.6f}")

# %% At a dense point the value is a numerical limit.  t^(1/3) at 0 with
# alpha = 1/3 is the classic example with a nonzero answer.
res = frac_derivative(fn("t^(1/3)"), Reals(), 0, "1/3")
print("t^(1/3) at 0:", res.value, res.method, "samples:", res.samples_used)

# for smooth functions and alpha < 1 the dense limit vanishes
res = frac_derivative(fn("sin(t)"), Reals(), 1, "1/2")
print("sin at 1, alpha=1/2:", res.value, res.method)

# %% The identity on the Cantor approximation: (1/3)^(1 - alpha) at t = 1/3
C = CantorApprox(5)
alphas = np.linspace(0.1, 1.0, 10)
values = [frac_derivative(fn("t"), C, F(1, 3), F(a).limit_denominator(100)).value for a in alphas]
print(np.column_stack([alphas, values, (1 / 3) ** (1 - alphas)]))

# %% Order 1.3 = one delta derivative followed by order 0.3
for h in (F(1, 2), F(1), F(2)):
    v = higher_frac_derivative(square, UniformGrid(h), 0, "1.3").value
    print(f"h={h}: {v:.15f}  vs 2 h^0.7 = {2 * float(h) ** 0.7:.15f}")

# %% Chain rule: some c in [t, sigma(t)] carries the whole composition
print("witness c:", chain_rule_witness(square, fn("2*t"), Z, 4, "1/2"))
