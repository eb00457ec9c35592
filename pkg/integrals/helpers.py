import math
import re
from decimal import Decimal, localcontext
from fractions import Fraction

RATIONAL_PATTERN = re.compile(r"^-?\d+(/\d+)?$")


def parse_rational(string):
    """Parses a rational written as "p/q" or "p".

    Floats and decimal notation are refused so that values like 1/3 survive
    the trip through a spec file exactly.

    Args:
        string (str): rational in "p/q" or "p" form

    Returns:
        Fraction: reduced value
    """
    if not isinstance(string, str) or not RATIONAL_PATTERN.match(string.strip()):
        raise ValueError(f"expected a rational string 'p/q' or 'p', got {string!r}")
    value = string.strip()
    _, _, denominator = value.partition("/")
    if denominator and int(denominator) == 0:
        raise ValueError(f"zero denominator in {string!r}")
    return Fraction(value)


def format_rational(value):
    """Formats a rational as "p/q", or "p" when the denominator is 1."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def decimal_string(value, digits=12):
    """Renders a rational as a decimal with `digits` significant digits.

    Args:
        value (Fraction): value to render
        digits (int, optional): significant digits. Defaults to 12.
    """
    value = Fraction(value)
    with localcontext() as context:
        context.prec = digits
        rendered = Decimal(value.numerator) / Decimal(value.denominator)
    return str(rendered)


def as_fraction(value):
    """Converts ints, Fractions and rational strings to Fraction; floats are refused."""
    if isinstance(value, float):
        raise TypeError(f"floats are not exact rationals: {value!r}")
    if isinstance(value, str):
        return parse_rational(value)
    return Fraction(value)


def dyadic_exponent(value):
    """Returns the smallest e with value * 2**e an integer, or None if there is none."""
    denominator = Fraction(value).denominator
    if denominator & (denominator - 1):
        return None
    return denominator.bit_length() - 1


def grid_floor(value, level):
    """Rounds a nonnegative value down to the grid k/2**level."""
    scale = 2**level
    return Fraction(math.floor(Fraction(value) * scale), scale)


def grid_floor_strict(value, level):
    """Largest grid point k/2**level strictly below value (never below zero)."""
    scale = 2**level
    return Fraction(max(math.ceil(Fraction(value) * scale) - 1, 0), scale)


def ceil_int(value):
    return math.ceil(Fraction(value))
