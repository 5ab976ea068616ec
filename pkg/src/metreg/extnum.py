"""Exact non-negative extended reals.

Finite values are :class:`fractions.Fraction`; the single infinite value is
``INF`` (``math.inf``).  ``Fraction`` compares exactly against ``math.inf``,
so ordinary ``<``/``<=`` work on mixed values without any tolerance.

Conventions for degenerate cases::

    inf over the empty set  = INF
    sup over the empty set  = 0
    0 * INF                 = 1
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Union

INF = math.inf

ExtReal = Union[Fraction, float]
RationalLike = Union[int, Fraction, str]


def is_inf(x) -> bool:
    return isinstance(x, float) and x == INF


def ext(value) -> ExtReal:
    """Coerce ``value`` to an ExtReal.

    Accepts ints, Fractions, ``"p/q"`` strings, ``"inf"`` and ``math.inf``.
    Finite floats are rejected so that no inexact value enters a comparison.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not extended reals")
    if isinstance(value, float):
        if value == INF:
            return INF
        raise TypeError(f"finite float {value!r} is not exact; pass a Fraction or 'p/q'")
    if isinstance(value, str):
        s = value.strip().lower()
        if s in ("inf", "+inf", "infinity", "∞"):
            return INF
        value = Fraction(s)
    elif isinstance(value, int):
        value = Fraction(value)
    elif not isinstance(value, Fraction):
        raise TypeError(f"cannot interpret {value!r} as an extended real")
    if value < 0:
        raise ValueError(f"extended reals are non-negative, got {value}")
    return value


def rational(value) -> Fraction:
    """Coerce to a (possibly negative) finite Fraction; used for coordinates."""
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def inf_over(values: Iterable[ExtReal]) -> ExtReal:
    best: ExtReal = INF
    for v in values:
        if v < best:
            best = v
    return best


def sup_over(values: Iterable[ExtReal]) -> ExtReal:
    best: ExtReal = Fraction(0)
    for v in values:
        if v > best:
            best = v
    return best


def scale(c: ExtReal, x: ExtReal) -> ExtReal:
    if is_inf(x):
        return Fraction(1) if c == 0 else INF
    if is_inf(c):
        return Fraction(1) if x == 0 else INF
    return c * x


def add(x: ExtReal, y: ExtReal) -> ExtReal:
    if is_inf(x) or is_inf(y):
        return INF
    return x + y


def to_str(x: ExtReal) -> str:
    if is_inf(x):
        return "inf"
    if isinstance(x, int):
        x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def display(x: ExtReal) -> str:
    """Six significant digits, for human-readable output only."""
    if is_inf(x):
        return "inf"
    return f"{float(x):.6g}"
