"""Exact rational parsing and formatting.

Rationals travel as ``"num/den"`` strings. Any valid fraction is accepted on
input; output is always reduced with a positive denominator.
"""

from __future__ import annotations

import re
from fractions import Fraction

from latticelp.errors import InvalidInput

_RATIONAL = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*([+-]?\d+)\s*)?$")


def parse_rational(text: str | int | Fraction) -> Fraction:
    """Parse ``"3"``, ``"-1/3"`` or ``"6/4"`` into a Fraction."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, bool):
        raise InvalidInput(f"not a rational: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    match = _RATIONAL.match(str(text))
    if not match:
        raise InvalidInput(f"not a rational: {text!r}", value=str(text))
    num, den = match.group(1), match.group(2)
    if den is not None and int(den) == 0:
        raise InvalidInput(f"zero denominator: {text!r}", value=str(text))
    return Fraction(int(num), int(den) if den is not None else 1)


def format_rational(value: Fraction | int) -> str:
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def format_vector(values) -> list[str]:
    return [format_rational(v) for v in values]
