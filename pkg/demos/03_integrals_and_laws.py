"""Cauchy fractional integrals and randomized checks of the calculus rules."""

import time
from fractions import Fraction as F

from chronofrac import UniformGrid, cauchy_frac_integral, fn, parse_scale, run_randomized_suite

Z = UniformGrid(1)

# %% On Z, every order below 1 gives the same answer for f(t) = t on [1, 10]:
# the order-(1 - beta) derivative of the antiderivative is f(t) mu^beta = t
for beta in ("0", "1/4", "1/3", "1/2", "2/3", "1"):
    print(f"beta={beta:>3}: {cauchy_frac_integral(fn('t'), Z, 1, 10, F(beta))}")
# order 1 is the plain delta integral 1 + 2 + ... + 9

# %% A mixed scale.  Fractional orders only pick up the jumps at the end points.
T = parse_scale("union:{[0,1],{3/2},[2,3]}")
for beta in ("1/2", "1"):
    print(f"{T}, beta={beta}: {cauchy_frac_integral(fn('t^2'), T, F(1, 2), 3, F(beta)):.12f}")

# %% The randomized law suite
start = time.perf_counter()
reports = run_randomized_suite(seed=1, n_cases=50)
for r in reports:
    print(f"{r.law_id:<18} cases={r.cases_run:>3}  max residual={r.max_residual:.2e}  "
          f"{'ok' if r.passed else 'FAILED'}")
print(f"{time.perf_counter() - start:.1f} s")
