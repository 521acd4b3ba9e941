"""Exact rational helpers for scaling factors.

Rationals are plain :class:`fractions.Fraction` values. The helpers here add
the lattice-related operations (gcd/lcm of rational lists, integer-multiple
tests) and the tri-state comparison used everywhere a decision may be exact
or only numerical.
"""

from __future__ import annotations

import math
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from functools import reduce
from numbers import Real
from typing import Iterable, Optional, Union

from .errors import SpecError

Rational = Fraction
Number = Union[Fraction, float]

MAX_DENOMINATOR = 10**9


def as_rational(value, *, cap: int = MAX_DENOMINATOR) -> Fraction:
    """Convert ``value`` to an exact Fraction with denominator at most ``cap``.

    Accepts ints, Fractions, ``"p/q"`` or decimal strings, and floats whose
    shortest decimal representation is exact within the cap.
    """
    if isinstance(value, bool):
        raise SpecError(f"boolean is not a rational number: {value!r}")
    if isinstance(value, Fraction):
        r = value
    elif isinstance(value, int):
        r = Fraction(value)
    elif isinstance(value, str):
        try:
            r = Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise SpecError(f"invalid rational literal {value!r}") from exc
    elif isinstance(value, Real):
        if not math.isfinite(float(value)):
            raise SpecError(f"non-finite value {value!r}")
        r = Fraction(Decimal(repr(float(value))))
    else:
        raise SpecError(f"cannot interpret {value!r} as a rational number")
    if r.denominator > cap:
        raise SpecError(f"denominator of {value!r} exceeds {cap}")
    return r


def coerce_number(value) -> Number:
    """Normalize a user-supplied real.

    Short decimals (``0.25``, ``"1/3"``, ``7``) become Fractions so that
    equality cases can be decided exactly; anything else stays a float.
    """
    if isinstance(value, bool):
        raise SpecError(f"boolean is not a number: {value!r}")
    if isinstance(value, (int, Fraction, str)):
        return as_rational(value)
    try:
        f = float(value)
    except (TypeError, ValueError) as exc:
        raise SpecError(f"not a number: {value!r}") from exc
    if not math.isfinite(f):
        raise SpecError(f"non-finite value {value!r}")
    try:
        r = Fraction(Decimal(repr(f)))
    except InvalidOperation:  # pragma: no cover - repr of a finite float is always valid
        return f
    return r if r.denominator <= MAX_DENOMINATOR else f


def is_exact(*values) -> bool:
    return all(isinstance(v, (int, Fraction)) and not isinstance(v, bool) for v in values)


def rational_gcd(values: Iterable[Fraction]) -> Fraction:
    """Largest rational g such that every entry is an integer multiple of g."""
    vals = [as_rational(v) for v in values]
    if not vals:
        raise SpecError("rational_gcd of an empty list")
    if any(v <= 0 for v in vals):
        raise SpecError("rational_gcd requires positive entries")
    lcm_den = reduce(math.lcm, (v.denominator for v in vals))
    g = reduce(math.gcd, (v.numerator * (lcm_den // v.denominator) for v in vals))
    return Fraction(g, lcm_den)


def rational_lcm(values: Iterable[Fraction]) -> Fraction:
    """Smallest positive rational that is an integer multiple of every entry."""
    vals = [as_rational(v) for v in values]
    if not vals:
        raise SpecError("rational_lcm of an empty list")
    num = reduce(math.lcm, (v.numerator for v in vals))
    den = reduce(math.gcd, (v.denominator for v in vals))
    return Fraction(num, den)


def integer_multiple_of(x: Fraction, y: Fraction) -> Optional[int]:
    """Return n >= 1 with x == n*y, or None."""
    r = Fraction(x) / Fraction(y)
    if r.denominator == 1 and r >= 1:
        return int(r)
    return None


def compare(lhs: Number, rhs: Number, rel: float = 1e-12, scale: float = 0.0) -> Optional[int]:
    """Sign of ``lhs - rhs``.

    Exact operands give an exact answer. Otherwise ``None`` is returned when
    the difference is within ``rel`` times the operand magnitude (or the
    explicit ``scale``), i.e. when floating point cannot decide.
    """
    if is_exact(lhs, rhs):
        d = Fraction(lhs) - Fraction(rhs)
        return (d > 0) - (d < 0)
    a, b = float(lhs), float(rhs)
    d = a - b
    if abs(d) <= rel * max(abs(a), abs(b), scale):
        return None
    return 1 if d > 0 else -1


def exact_pow(base: Number, exponent: Number) -> Optional[Fraction]:
    """``base**exponent`` as a Fraction when that is exactly representable."""
    if is_exact(base, exponent) and Fraction(exponent).denominator == 1:
        return Fraction(base) ** int(exponent)
    return None


def pow_upper(base: Fraction, exponent: Fraction) -> Fraction:
    """Exact upper bound of ``base**exponent`` for 0 < base < 1, exponent >= 0."""
    return Fraction(base) ** math.floor(exponent)


def to_str(r: Fraction) -> str:
    return str(r.numerator) if r.denominator == 1 else f"{r.numerator}/{r.denominator}"
