"""Exact rational parsing and rendering shared by every module."""

from fractions import Fraction
from numbers import Rational

__all__ = ["to_fraction", "format_fraction"]


def to_fraction(value, what="value"):
    """Coerce an int, Fraction, or decimal / "p/q" string to a Fraction.

    Floats are refused: they cannot represent most decimal inputs exactly and
    the diffusion threshold test is a non-strict comparison.
    """
    if isinstance(value, bool):
        raise TypeError(f"{what}: booleans are not numbers here")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, Rational):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"{what}: cannot parse {value!r} as a rational number") from None
    if isinstance(value, float):
        raise TypeError(f"{what}: floats are inexact; pass {value!r} as a string")
    raise TypeError(f"{what}: unsupported number type {type(value).__name__}")


def format_fraction(value):
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"
