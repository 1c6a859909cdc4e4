"""Local fractional calculus on time scales.

Derivatives of order ``alpha`` in ``]0, 1]`` (and ``N + alpha`` by iteration),
Cauchy fractional integrals, and residual checks of the calculus rules, on
the real line, uniform grids, finite unions of intervals and points, and
finite Cantor approximations.
"""

from .errors import *  # noqa: F401,F403
from .expr import classical_derivative, evaluate, parse, to_string
from .fracderiv import (
    DeltaDerivativeFn,
    chain_rule_witness,
    delta_derivative,
    frac_derivative,
    higher_frac_derivative,
    power_rule_derivative,
)
from .functions import CallableFn, ExprFn, FnOnScale, TableFn, as_fn, constant, fn
from .integral import (
    Antiderivative,
    cauchy_frac_integral,
    delta_antiderivative,
    delta_integral,
    frac_indefinite_integral,
)
from .laws import (
    LawReport,
    check_chain_rule,
    check_integral_laws,
    check_power_rule,
    check_product_rule,
    check_quotient_rules,
    check_scalar_rule,
    check_simple_useful_formula,
    check_sum_rule,
    run_randomized_suite,
)
from .limits import DerivResult, LimitOptions, Method, limit_quotient
from .orders import FractionalOrder, HigherOrder
from .quadrature import adaptive_simpson
from .timescale import (
    CantorApprox,
    FiniteUnion,
    PointClass,
    Reals,
    TimeScale,
    UniformGrid,
    approach_points,
    classify,
    graininess,
    in_kappa,
    parse_scale,
    rho,
    sigma,
)

__version__ = "0.1.0"
