"""Exact rational orders and the sign-preserving real power."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import NegativeBaseUndefined
from .timescale import parse_number


def to_fraction(x) -> Fraction:
    """Convert an order given as int, Fraction, str or float to a Fraction.

    Floats go through their shortest decimal repr, so ``0.3`` becomes
    ``3/10`` rather than the nearest binary fraction.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int) and not isinstance(x, bool):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(repr(x))
    if isinstance(x, str):
        return parse_number(x)
    if isinstance(x, (FractionalOrder, HigherOrder)):
        return x.value
    raise TypeError(f"cannot interpret {x!r} as an order")


@dataclass(frozen=True)
class FractionalOrder:
    """An order ``alpha = p/q`` in ``]0, 1]`` stored in lowest terms."""

    p: int
    q: int

    def __post_init__(self):
        g = math.gcd(self.p, self.q)
        if g != 1:
            object.__setattr__(self, "p", self.p // g)
            object.__setattr__(self, "q", self.q // g)
        if not (0 < self.p <= self.q):
            raise ValueError(f"order {self.p}/{self.q} is not in ]0, 1]")

    @classmethod
    def of(cls, x) -> FractionalOrder:
        if isinstance(x, FractionalOrder):
            return x
        fr = to_fraction(x)
        return cls(fr.numerator, fr.denominator)

    @property
    def value(self) -> Fraction:
        return Fraction(self.p, self.q)

    def __float__(self) -> float:
        return self.p / self.q

    def __str__(self) -> str:
        return str(self.p) if self.q == 1 else f"{self.p}/{self.q}"

    def odd_reciprocal(self) -> bool:
        """True for ``1/q`` with ``q`` odd (``alpha = 1`` included): exactly
        the orders whose power ``x**alpha`` is real for negative ``x``."""
        return self.p == 1 and self.q % 2 == 1

    def is_one(self) -> bool:
        return self.p == self.q


@dataclass(frozen=True)
class HigherOrder:
    """A nonnegative order ``beta = N + alpha`` with ``N = floor(beta)``."""

    value: Fraction

    def __post_init__(self):
        v = to_fraction(self.value)
        if v < 0:
            raise ValueError(f"order must be nonnegative, got {v}")
        object.__setattr__(self, "value", v)

    @classmethod
    def of(cls, x) -> HigherOrder:
        return x if isinstance(x, HigherOrder) else cls(to_fraction(x))

    @property
    def n(self) -> int:
        return math.floor(self.value)

    @property
    def alpha(self) -> FractionalOrder | None:
        """Fractional part as an order, or ``None`` when ``beta`` is an integer."""
        rest = self.value - self.n
        return None if rest == 0 else FractionalOrder(rest.numerator, rest.denominator)

    def __str__(self) -> str:
        return str(self.value)


def rpow(x: float, alpha: FractionalOrder | Fraction) -> float:
    """``x**alpha`` on the reals.

    Negative bases are allowed only when the rational exponent has an odd
    denominator, in which case the real root is taken:
    ``rpow(-8, 1/3) == -2``.
    """
    fr = alpha.value if isinstance(alpha, FractionalOrder) else to_fraction(alpha)
    return real_power(x, fr)


def real_power(x: float, exponent: Fraction) -> float:
    x = float(x)
    if exponent.denominator == 1:
        n = exponent.numerator
        if x == 0.0 and n < 0:
            raise ZeroDivisionError("0 raised to a negative power")
        return x**n
    if x >= 0.0:
        if x == 0.0 and exponent < 0:
            raise ZeroDivisionError("0 raised to a negative power")
        return x ** float(exponent)
    if exponent.denominator % 2 == 0:
        raise NegativeBaseUndefined(f"({x})^({exponent}) has no real value")
    mag = (-x) ** float(exponent)
    return -mag if exponent.numerator % 2 else mag
