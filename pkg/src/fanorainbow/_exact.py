"""Exact rationals and certified interval comparisons."""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

from mpmath.ctx_iv import MPIntervalContext

PRECISION = 256

# a private context, so the precision here never leaks into mpmath.iv
iv = MPIntervalContext()
iv.prec = PRECISION


def as_fraction(x) -> Fraction:
    """Exact rational from an int, Fraction, decimal string or 'p/q' string.

    Floats go through their shortest repr, so ``0.01`` means 1/100.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(repr(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot read {x!r} as a rational")


def to_iv(x):
    if isinstance(x, Fraction):
        return iv.mpf(x.numerator) / iv.mpf(x.denominator)
    if isinstance(x, int):
        return iv.mpf(x)
    return x


def certify_lt(a, b) -> bool | None:
    """True if a < b for sure, False if a >= b for sure, None if the intervals overlap."""
    a, b = to_iv(a), to_iv(b)
    if a.b < b.a:
        return True
    if a.a >= b.b:
        return False
    return None


def certify_le(a, b) -> bool | None:
    a, b = to_iv(a), to_iv(b)
    if a.b <= b.a:
        return True
    if a.a > b.b:
        return False
    return None


def frac_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
