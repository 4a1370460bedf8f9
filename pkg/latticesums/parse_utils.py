"""
parse_utils

A module to parse the textual inputs of latticesums: rationals written as
"p/q", complex constants, comma separated vectors and weight lists
"""
from fractions import Fraction

from latticesums.errors import ArrangementError
from latticesums.scalar import GaussianRational


def parse_rational(text):
    """
    Parses "p/q", a bare integer or a decimal string into a Fraction.

    Examples:
        parse_rational("1/3") -> Fraction(1, 3)
        parse_rational(2) -> Fraction(2, 1)
    """
    if isinstance(text, Fraction):
        return text
    if isinstance(text, bool):
        raise ArrangementError(f"not a rational number: {text!r}")
    if isinstance(text, float):
        raise ArrangementError(
            f"floats are not exact, write {text!r} as \"p/q\"")
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as e:
        raise ArrangementError(f"not a rational number: {text!r}") from e


def parse_constant(value):
    """
    Parses the constant of a functional: "p/q", an int, a float (numeric
    mode only) or {"re": ..., "im": ...}.

    Returns:
        Fraction, GaussianRational or complex
    """
    if isinstance(value, dict):
        re, im = value.get('re', 0), value.get('im', 0)
        if isinstance(re, float) or isinstance(im, float):
            return complex(re, im)
        re, im = parse_rational(re), parse_rational(im)
        if im == 0:
            return re
        return GaussianRational(re, im)
    if isinstance(value, complex):
        return value
    if isinstance(value, float):
        return complex(value)
    return parse_rational(value)


def parse_vector(text, exact=True):
    """
    Parses "1/3,1/7" into a tuple of Fractions, or floats when exact is
    False and an entry is written in decimal notation.
    """
    if isinstance(text, (list, tuple)):
        items = list(text)
    else:
        items = [s for s in str(text).split(',') if s.strip()]
    out = []
    for item in items:
        if not exact and isinstance(item, str) and ('.' in item
                                                    or 'e' in item.lower()):
            out.append(float(item))
        else:
            out.append(parse_rational(item))
    return tuple(out)


def parse_int_list(text):
    """Parses a comma-separated list (or a sequence) into a tuple of ints."""
    if isinstance(text, (list, tuple)):
        return tuple(int(x) for x in text)
    try:
        return tuple(int(s) for s in str(text).split(',') if s.strip())
    except ValueError as e:
        raise ArrangementError(f"not a list of integers: {text!r}") from e


def parse_weights(text):
    """
    Parses "2,2,2" into a weight vector of nonnegative integers.
    """
    k = parse_int_list(text)
    if any(x < 0 for x in k):
        raise ArrangementError(f"weights must be nonnegative: {text!r}")
    return k


def broadcast_y(y, rank):
    """
    Accepts "0" (or a single value) as shorthand for the zero vector of the
    given rank.
    """
    y = tuple(y)
    if len(y) == 1 and rank > 1 and y[0] == 0:
        return (y[0],) * rank
    if len(y) != rank:
        raise ArrangementError(f"y has {len(y)} entries, expected {rank}")
    return y
