"""Deterministic text encodings shared by the law reports and the CLI."""

from __future__ import annotations

import json
import math
from enum import Enum
from fractions import Fraction


def fmt17(x: float) -> str:
    """17 significant digits: enough to round-trip any double."""
    x = float(x)
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return format(x, ".17g")


def fmt_short(x: float) -> str:
    """Shortest string that round-trips."""
    return repr(float(x))


def exact_str(x) -> str:
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return repr(x) if isinstance(x, float) else str(x)


def dumps(obj) -> str:
    """Compact JSON with sorted keys and every float printed via ``fmt17``."""
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, Enum):
        return json.dumps(str(obj.value))
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return fmt17(obj)
    if isinstance(obj, Fraction):
        return json.dumps(exact_str(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        items = sorted(obj.items(), key=lambda kv: str(kv[0]))
        return "{" + ",".join(f"{json.dumps(str(k))}:{dumps(v)}" for k, v in items) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(dumps(v) for v in obj) + "]"
    return json.dumps(str(obj))
