"""Scalar handling shared by every module.

A scalar is either an exact rational (``fractions.Fraction``, always in
canonical reduced form with positive denominator) or a double-precision
float.  A weight vector is single-mode: all exact or all float, never a
mixture.  Integers count as exact and are normalised to ``Fraction``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import ModeMismatchError, ParseError

Scalar = Union[Fraction, float]

EXACT = "exact"
FLOAT = "float"


def is_exact(value) -> bool:
    return isinstance(value, (Fraction, int)) and not isinstance(value, bool)


def parse_scalar(value) -> Scalar:
    """Parse one JSON-level scalar: 'num/den' or integer string -> Fraction,
    int -> Fraction, float -> float."""
    if isinstance(value, bool):
        raise ParseError(f"boolean is not a scalar: {value!r}")
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"cannot parse rational {value!r}: {exc}") from None
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return value
    raise ParseError(f"cannot parse scalar of type {type(value).__name__}")


def parse_weights(values: Sequence) -> tuple[Scalar, ...]:
    """Parse a JSON weight list, inferring the mode and rejecting mixtures.

    Strings force exact mode (integers are then read exactly as well);
    any float puts the whole vector in float mode.  A vector containing
    both a string and a float is rejected.
    """
    if not isinstance(values, (list, tuple)):
        raise ParseError("weights must be a JSON array")
    has_str = any(isinstance(v, str) for v in values)
    has_float = any(isinstance(v, float) for v in values)
    if has_str and has_float:
        raise ParseError("weights mix 'num/den' strings with floats")
    parsed = tuple(parse_scalar(v) for v in values)
    if not has_str and has_float:
        parsed = tuple(float(v) for v in parsed)
    return parsed


def mode_of(values: Iterable[Scalar]) -> str:
    """Return EXACT or FLOAT for a scalar vector; reject mixed vectors."""
    values = list(values)
    exact = [is_exact(v) for v in values]
    if all(exact):
        return EXACT
    if not any(exact) and all(isinstance(v, float) for v in values):
        return FLOAT
    raise ModeMismatchError("vector mixes exact and float scalars")


def normalize(values: Iterable[Scalar]) -> tuple[Scalar, ...]:
    """Coerce ints to Fraction so exact vectors are uniformly Fraction."""
    out = []
    for v in values:
        if is_exact(v):
            out.append(Fraction(v))
        else:
            out.append(v)
    return tuple(out)


def to_float(value: Scalar) -> float:
    return float(value)


def scalar_to_json(value: Scalar):
    """Fractions serialize as 'num/den' strings, floats as JSON numbers."""
    if is_exact(value):
        return str(Fraction(value))
    return float(value)
