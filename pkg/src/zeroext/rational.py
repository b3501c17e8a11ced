"""Exact rational helpers and the extended value +inf used by cost tables."""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import lcm
from typing import Union


class _Infinity:
    """The value +inf of the extended reals.

    Follows the convention ``inf * 0 = 0`` so that zero-coefficient terms of a
    fractional join never poison a sum.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __str__(self):
        return "inf"

    def __hash__(self):
        return hash("zeroext.INF")

    def __eq__(self, other):
        return other is self

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __sub__(self, other):
        if other is self:
            raise ArithmeticError("inf - inf is undefined")
        return self

    def __mul__(self, other):
        if other == 0:
            return Fraction(0)
        if other < 0:
            raise ArithmeticError("negative multiple of inf")
        return self

    __rmul__ = __mul__


INF = _Infinity()

Value = Union[Fraction, _Infinity]


def is_inf(x) -> bool:
    return x is INF


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not accepted; pass int, str or Fraction")
    return Fraction(x)


def as_value(x) -> Value:
    if x is INF:
        return INF
    if isinstance(x, str) and x.strip().lower() in ("inf", "infinity"):
        return INF
    return as_fraction(x)


def parse_rational(text: str) -> Fraction:
    """Parse ``num`` or ``num/den`` (no decimals, no floats)."""
    text = text.strip()
    if "/" in text:
        num, den = text.split("/", 1)
        if not den.strip():
            raise ValueError(f"malformed rational {text!r}")
        return Fraction(int(num), int(den))
    return Fraction(int(text))


def format_rational(x) -> str:
    if x is INF:
        return "inf"
    x = as_fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def common_denominator(values) -> int:
    return reduce(lcm, (as_fraction(v).denominator for v in values), 1)
