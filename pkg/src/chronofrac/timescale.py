"""Time scales: nonempty closed subsets of the real line.

Four representations are supported: the whole real line, uniform grids
``hZ + anchor``, finite unions of closed intervals and single points, and the
depth-``d`` approximation of the Cantor set.  All of them expose the jump
operators ``sigma``/``rho``, the graininess ``mu`` and a point taxonomy.

Exact inputs (``int``, ``Fraction``) are handled exactly; floats are snapped
to the nearest scale point within a relative tolerance of ``1e-12``.
"""

from __future__ import annotations

import math
import re
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Literal, Sequence, Union

from .errors import ParseError, PointNotInScale

Real = Union[int, float, Fraction]

REL_TOL = 1e-12
TABLE_DEPTH = 12


def as_exact(x) -> Real:
    """Return ``x`` as an exact rational when that is possible.

    Strings are parsed as decimals or ``p/q`` rationals.  Floats are kept
    as floats (their binary expansion is rarely what the user meant).
    """
    if isinstance(x, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"non-finite value {x!r}")
        return x
    if isinstance(x, str):
        return parse_number(x)
    raise TypeError(f"cannot interpret {x!r} as a real number")


def parse_number(text: str) -> Fraction:
    """Parse ``"3"``, ``"-0.25"``, ``"1e-3"`` or ``"2/7"`` into a Fraction."""
    s = text.strip()
    try:
        if "/" in s:
            num, den = s.split("/", 1)
            value = Fraction(num.strip()) / Fraction(den.strip())
        else:
            value = Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"invalid number {text!r}") from exc
    return value


def close(a: Real, b: Real) -> bool:
    if a == b:
        return True
    return abs(a - b) <= REL_TOL * max(1.0, abs(float(b)))


@dataclass(frozen=True)
class PointClass:
    right_scattered: bool
    left_scattered: bool
    is_min: bool
    is_max: bool

    @property
    def right_dense(self) -> bool:
        return not self.right_scattered and not self.is_max

    @property
    def left_dense(self) -> bool:
        return not self.left_scattered and not self.is_min

    @property
    def isolated(self) -> bool:
        return self.right_scattered and self.left_scattered


class TimeScale:
    """Common interface; concrete scales override the primitive hooks."""

    def snap(self, t: Real) -> Real:
        """Return the canonical scale point equal to ``t`` or raise."""
        raise NotImplementedError

    def contains(self, t: Real) -> bool:
        try:
            self.snap(t)
        except PointNotInScale:
            return False
        return True

    def __contains__(self, t) -> bool:
        return self.contains(t)

    @property
    def min(self) -> Real | None:
        return None

    @property
    def max(self) -> Real | None:
        return None

    def sigma(self, t: Real) -> Real:
        raise NotImplementedError

    def rho(self, t: Real) -> Real:
        raise NotImplementedError

    def floor_point(self, x: Real) -> Real | None:
        """Largest scale point ``<= x`` (``None`` if there is none)."""
        raise NotImplementedError

    def ceil_point(self, x: Real) -> Real | None:
        """Smallest scale point ``>= x`` (``None`` if there is none)."""
        raise NotImplementedError

    def bracket(self, x: Real) -> tuple[Real | None, Real | None]:
        """``(floor_point(x), ceil_point(x))``."""
        return self.floor_point(x), self.ceil_point(x)

    def segments(self, lo: Real, hi: Real) -> list[tuple[Real, Real]]:
        """Connected pieces of ``T ∩ [lo, hi]`` in increasing order.

        A piece ``(a, a)`` is a single point, ``(a, b)`` with ``a < b`` a
        closed interval.
        """
        raise NotImplementedError

    def graininess(self, t: Real) -> Real:
        p = self.snap(t)
        return self.sigma(p) - p

    mu = graininess

    def classify(self, t: Real) -> PointClass:
        p = self.snap(t)
        lo, hi = self.min, self.max
        return PointClass(
            right_scattered=self.sigma(p) > p,
            left_scattered=self.rho(p) < p,
            is_min=lo is not None and p == lo,
            is_max=hi is not None and p == hi,
        )

    def in_kappa(self, t: Real) -> bool:
        p = self.snap(t)
        hi = self.max
        if hi is None or p != hi:
            return True
        return not self.rho(p) < p


@dataclass(frozen=True)
class Reals(TimeScale):
    def __str__(self) -> str:
        return "R"

    def snap(self, t: Real) -> Real:
        return as_exact(t)

    def sigma(self, t: Real) -> Real:
        return self.snap(t)

    def rho(self, t: Real) -> Real:
        return self.snap(t)

    def floor_point(self, x: Real) -> Real:
        return x

    def ceil_point(self, x: Real) -> Real:
        return x

    def segments(self, lo: Real, hi: Real) -> list[tuple[Real, Real]]:
        if hi < lo:
            return []
        return [(as_exact(lo), as_exact(hi))]


@dataclass(frozen=True)
class UniformGrid(TimeScale):
    """The grid ``{anchor + k*h : k integer}``."""

    h: Real
    anchor: Real = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "h", as_exact(self.h))
        object.__setattr__(self, "anchor", as_exact(self.anchor))
        if not self.h > 0:
            raise ValueError(f"grid step must be positive, got {self.h}")

    def __str__(self) -> str:
        if self.anchor == 0:
            return "Z" if self.h == 1 else f"hZ:{self.h}"
        return f"hZ:{self.h}@{self.anchor}"

    def _ratio(self, x: Real):
        return (as_exact(x) - self.anchor) / self.h

    def index(self, t: Real) -> int:
        r = self._ratio(t)
        k = round(r)
        if r == k or abs(r - k) <= REL_TOL * max(1.0, abs(k)):
            return int(k)
        raise PointNotInScale(t, self)

    def point(self, k: int) -> Real:
        return self.anchor + k * self.h

    def snap(self, t: Real) -> Real:
        return self.point(self.index(t))

    def sigma(self, t: Real) -> Real:
        return self.point(self.index(t) + 1)

    def rho(self, t: Real) -> Real:
        return self.point(self.index(t) - 1)

    def graininess(self, t: Real) -> Real:
        self.index(t)
        return self.h

    mu = graininess

    def floor_point(self, x: Real) -> Real:
        try:
            return self.snap(x)
        except PointNotInScale:
            return self.point(math.floor(self._ratio(x)))

    def ceil_point(self, x: Real) -> Real:
        try:
            return self.snap(x)
        except PointNotInScale:
            return self.point(math.ceil(self._ratio(x)))

    def segments(self, lo: Real, hi: Real) -> list[tuple[Real, Real]]:
        first, last = self.ceil_point(lo), self.floor_point(hi)
        if last < first:
            return []
        k0, k1 = self.index(first), self.index(last)
        return [(self.point(k), self.point(k)) for k in range(k0, k1 + 1)]


Location = tuple  # ("in", i) | ("gap", i) | ("below",) | ("above",)


class _ComponentScale(TimeScale):
    """A scale made of finitely many sorted, separated closed components."""

    @property
    def n_components(self) -> int:
        raise NotImplementedError

    def component(self, i: int) -> tuple[Real, Real]:
        raise NotImplementedError

    def locate(self, x: Real) -> Location:
        """Where ``x`` sits: inside component ``i``, in the gap after ``i``,
        below the first component or above the last one."""
        raise NotImplementedError

    def components_between(self, lo: Real, hi: Real) -> range:
        loc = self.locate(lo)
        first = {"in": lambda: loc[1], "gap": lambda: loc[1] + 1,
                 "below": lambda: 0, "above": lambda: self.n_components}[loc[0]]()
        loc = self.locate(hi)
        last = {"in": lambda: loc[1], "gap": lambda: loc[1],
                "below": lambda: -1, "above": lambda: self.n_components - 1}[loc[0]]()
        return range(first, last + 1)

    @property
    def min(self) -> Real:
        return self.component(0)[0]

    @property
    def max(self) -> Real:
        return self.component(self.n_components - 1)[1]

    def _snap_located(self, t: Real) -> tuple[Real, int]:
        x = as_exact(t)
        loc = self.locate(x)
        if loc[0] == "in":
            i = loc[1]
            a, b = self.component(i)
            if close(x, a):
                return a, i
            if close(x, b):
                return b, i
            return x, i
        # a float a hair outside a component still counts as its endpoint
        if loc[0] == "gap":
            candidates = [(self.component(loc[1])[1], loc[1]),
                          (self.component(loc[1] + 1)[0], loc[1] + 1)]
        elif loc[0] == "below":
            candidates = [(self.min, 0)]
        else:
            candidates = [(self.max, self.n_components - 1)]
        for p, i in candidates:
            if close(x, p):
                return p, i
        raise PointNotInScale(t, self)

    def snap(self, t: Real) -> Real:
        return self._snap_located(t)[0]

    def sigma(self, t: Real) -> Real:
        p, i = self._snap_located(t)
        if p < self.component(i)[1]:
            return p
        if i + 1 < self.n_components:
            return self.component(i + 1)[0]
        return p

    def rho(self, t: Real) -> Real:
        p, i = self._snap_located(t)
        if p > self.component(i)[0]:
            return p
        if i > 0:
            return self.component(i - 1)[1]
        return p

    def floor_point(self, x: Real) -> Real | None:
        loc = self.locate(x)
        if loc[0] == "in":
            return x
        if loc[0] == "gap":
            return self.component(loc[1])[1]
        if loc[0] == "above":
            return self.max
        return None

    def ceil_point(self, x: Real) -> Real | None:
        loc = self.locate(x)
        if loc[0] == "in":
            return x
        if loc[0] == "gap":
            return self.component(loc[1] + 1)[0]
        if loc[0] == "below":
            return self.min
        return None

    def bracket(self, x: Real) -> tuple[Real | None, Real | None]:
        loc = self.locate(x)
        if loc[0] == "in":
            return x, x
        if loc[0] == "gap":
            return self.component(loc[1])[1], self.component(loc[1] + 1)[0]
        if loc[0] == "below":
            return None, self.min
        return self.max, None

    def segments(self, lo: Real, hi: Real) -> list[tuple[Real, Real]]:
        if hi < lo:
            return []
        out = []
        for i in self.components_between(lo, hi):
            a, b = self.component(i)
            out.append((max(a, lo), min(b, hi)))
        return out

    def iter_components(self) -> Iterator[tuple[Real, Real]]:
        for i in range(self.n_components):
            yield self.component(i)


@dataclass(frozen=True)
class FiniteUnion(_ComponentScale):
    """Finite union of closed intervals ``(a, b)`` and single points ``(p, p)``.

    Components may be given in any order; overlapping or touching ones are
    merged so that the stored list is sorted and separated by positive gaps.
    """

    components: tuple[tuple[Real, Real], ...]

    def __init__(self, components: Sequence):
        pieces = []
        for c in components:
            if isinstance(c, (tuple, list)):
                if len(c) == 1:
                    a = b = as_exact(c[0])
                else:
                    a, b = as_exact(c[0]), as_exact(c[1])
            else:
                a = b = as_exact(c)
            if b < a:
                raise ValueError(f"interval [{a}, {b}] has a > b")
            pieces.append((a, b))
        if not pieces:
            raise ValueError("a time scale must be nonempty")
        pieces.sort()
        merged = [pieces[0]]
        for a, b in pieces[1:]:
            pa, pb = merged[-1]
            if a <= pb:
                merged[-1] = (pa, max(pb, b))
            else:
                merged.append((a, b))
        object.__setattr__(self, "components", tuple(merged))
        object.__setattr__(self, "_lefts", tuple(a for a, _ in merged))

    def __str__(self) -> str:
        parts = [f"{{{a}}}" if a == b else f"[{a},{b}]" for a, b in self.components]
        return "union:{" + ",".join(parts) + "}"

    @property
    def n_components(self) -> int:
        return len(self.components)

    def component(self, i: int) -> tuple[Real, Real]:
        return self.components[i]

    def locate(self, x: Real) -> Location:
        i = bisect_right(self._lefts, x) - 1
        if i < 0:
            return ("below",)
        if x <= self.components[i][1]:
            return ("in", i)
        if i == len(self.components) - 1:
            return ("above",)
        return ("gap", i)


@dataclass(frozen=True)
class CantorApprox(_ComponentScale):
    """Union of the ``2**depth`` closed intervals of the depth-``depth``
    Cantor construction on ``[0, 1]``.

    Points inside those intervals are treated as dense, so the left end
    points of removed gaps at levels ``m < depth`` have the exact graininess
    ``3**-(m+1)`` of the true Cantor set.
    """

    depth: int

    def __post_init__(self):
        if self.depth < 0:
            raise ValueError("Cantor depth must be >= 0")

    def __str__(self) -> str:
        return f"cantor:{self.depth}"

    @property
    def n_components(self) -> int:
        return 1 << self.depth

    def _component_exact(self, i: int) -> tuple[Fraction, Fraction]:
        d = self.depth
        if not 0 <= i < (1 << d):
            raise IndexError(i)
        left = Fraction(0)
        for k in range(1, d + 1):
            if (i >> (d - k)) & 1:
                left += Fraction(2, 3**k)
        return left, left + Fraction(1, 3**d)

    def _table(self) -> tuple[tuple[Fraction, ...], tuple[float, ...]] | None:
        """Left end points (exact and as floats) for depths small enough to
        enumerate; ``None`` beyond that."""
        if self.depth > TABLE_DEPTH:
            return None
        cached = self.__dict__.get("_lefts")
        if cached is None:
            lefts = tuple(self._component_exact(i)[0] for i in range(self.n_components))
            cached = (lefts, tuple(float(a) for a in lefts))
            object.__setattr__(self, "_lefts", cached)
        return cached

    def component(self, i: int) -> tuple[Fraction, Fraction]:
        table = self._table()
        if table is not None:
            if not 0 <= i < len(table[0]):
                raise IndexError(i)
            a = table[0][i]
            return a, a + Fraction(1, 3**self.depth)
        return self._component_exact(i)

    def locate(self, x: Real) -> Location:
        if x < 0:
            return ("below",)
        if x > 1:
            return ("above",)
        table = self._table()
        if table is not None:
            lefts, flefts = table
            # float bisection, then an exact check of the two neighbours
            i = bisect_right(flefts, float(x)) - 1
            for j in (i + 1, i, i - 1):
                if 0 <= j < len(lefts) and lefts[j] <= x:
                    i = j
                    break
            else:
                return ("below",)
            if x <= lefts[i] + Fraction(1, 3**self.depth):
                return ("in", i)
            return ("gap", i) if i + 1 < len(lefts) else ("above",)
        d = self.depth
        lo, length, idx = Fraction(0), Fraction(1), 0
        for k in range(1, d + 1):
            third = length / 3
            if x <= lo + third:
                idx = 2 * idx
            elif x >= lo + 2 * third:
                idx = 2 * idx + 1
                lo += 2 * third
            else:
                last_left = (2 * idx + 1) * (1 << (d - k)) - 1
                return ("gap", last_left)
            length = third
        return ("in", idx)


def sigma(T: TimeScale, t: Real) -> Real:
    return T.sigma(t)


def rho(T: TimeScale, t: Real) -> Real:
    return T.rho(t)


def graininess(T: TimeScale, t: Real) -> Real:
    return T.graininess(t)


def classify(T: TimeScale, t: Real) -> PointClass:
    return T.classify(t)


def in_kappa(T: TimeScale, t: Real) -> bool:
    return T.in_kappa(t)


def default_delta0(t: Real) -> float:
    return max(abs(float(t)), 1.0) / 16.0


def approach_points(
    T: TimeScale,
    t: Real,
    side: Literal["left", "right", "both"] = "left",
    k: int = 64,
    delta0: float | None = None,
    ratio: float = 0.5,
) -> list[Real]:
    """Scale points approaching ``t`` from the requested side.

    Target offsets ``delta0 * ratio**j`` are projected onto the nearest scale
    point strictly on that side; projections that do not move strictly closer
    to ``t`` are dropped, so the result may be shorter than ``k``.  With
    ``side="both"`` the two one-sided lists are merged by decreasing distance.
    """
    p = T.snap(t)
    if delta0 is None:
        delta0 = default_delta0(p)
    if side == "both":
        left = approach_points(T, p, "left", k, delta0, ratio)
        right = approach_points(T, p, "right", k, delta0, ratio)
        merged = [(abs(float(p - s)), 0, s) for s in left]
        merged += [(abs(float(p - s)), 1, s) for s in right]
        merged.sort(key=lambda e: (-e[0], e[1]))
        return [s for _, _, s in merged]
    return list(iter_approach_points(T, p, side, k, delta0, ratio))


def iter_approach_points(
    T: TimeScale,
    t: Real,
    side: Literal["left", "right"],
    k: int = 64,
    delta0: float | None = None,
    ratio: float = 0.5,
) -> Iterator[Real]:
    """Lazy one-sided version of ``approach_points``."""
    if not 0.0 < ratio < 1.0:
        raise ValueError(f"ratio must lie in ]0, 1[, got {ratio}")
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left', 'right' or 'both', not {side!r}")
    p = T.snap(t)
    if delta0 is None:
        delta0 = default_delta0(p)
    sign = -1.0 if side == "left" else 1.0
    tf = float(p)
    best = math.inf
    for j in range(k):
        x = tf + sign * delta0 * ratio**j
        if x == tf:
            break
        lo, hi = T.bracket(x)
        cands = [c for c in (lo, hi) if c is not None and (c < p if side == "left" else c > p)]
        if not cands:
            continue
        s = min(cands, key=lambda c: (abs(float(c) - x), abs(float(c - p))))
        dist = abs(float(p - s))
        if 0 < dist < best:
            best = dist
            yield s


_NUM = r"[-+]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][-+]?\d+)?(?:\s*/\s*[-+]?\d+)?"


def parse_scale(text: str) -> TimeScale:
    """Parse the scale mini-language.

    ``R`` | ``R[a,b]`` | ``Z`` | ``hZ:<h>`` | ``hZ:<h>@<anchor>`` |
    ``cantor:<d>`` | ``union:{<comp>,...}`` where each ``<comp>`` is
    ``[a,b]`` or ``{p}``.
    """
    s = text.strip()
    if s == "R":
        return Reals()
    if s == "Z":
        return UniformGrid(1, 0)
    m = re.fullmatch(rf"R\[\s*({_NUM})\s*,\s*({_NUM})\s*\]", s)
    if m:
        a, b = parse_number(m.group(1)), parse_number(m.group(2))
        if not a < b:
            raise ParseError(f"R[a,b] needs a < b in {text!r}")
        return FiniteUnion([(a, b)])
    m = re.fullmatch(rf"hZ:\s*({_NUM})\s*(?:@\s*({_NUM}))?", s)
    if m:
        h = parse_number(m.group(1))
        anchor = parse_number(m.group(2)) if m.group(2) else Fraction(0)
        if h <= 0:
            raise ParseError(f"grid step must be positive in {text!r}")
        return UniformGrid(h, anchor)
    m = re.fullmatch(r"cantor:\s*(\d+)", s)
    if m:
        return CantorApprox(int(m.group(1)))
    m = re.fullmatch(r"union:\s*\{(.*)\}", s)
    if m:
        body = m.group(1)
        comps = []
        for cm in re.finditer(rf"\[\s*({_NUM})\s*,\s*({_NUM})\s*\]|\{{\s*({_NUM})\s*\}}|(,)|(\s+)|(.)", body):
            if cm.group(1) is not None:
                a, b = parse_number(cm.group(1)), parse_number(cm.group(2))
                if not a < b:
                    raise ParseError(f"interval [{a},{b}] needs a < b")
                comps.append((a, b))
            elif cm.group(3) is not None:
                p = parse_number(cm.group(3))
                comps.append((p, p))
            elif cm.group(6) is not None:
                raise ParseError(f"unexpected {cm.group(6)!r} in scale {text!r}")
        if not comps:
            raise ParseError(f"empty union in {text!r}")
        return FiniteUnion(comps)
    raise ParseError(f"unrecognised scale {text!r}")
