"""Exact rational scalars and the Pochhammer symbol.

Rationals are ``fractions.Fraction``: always in lowest terms, denominator
positive, zero stored as ``0/1``.  The text form is ``"p/q"`` with the
denominator dropped when it is 1.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

from .errors import ParseError

Rational = Fraction
RationalLike = Union[int, Fraction, str]


class _Pole:
    """Marker for an undefined Gamma quotient (a result, not an exception)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "POLE"

    def __reduce__(self):
        return (_Pole, ())


POLE = _Pole()


def is_pole(value) -> bool:
    return value is POLE


def parse_rational(text: RationalLike) -> Fraction:
    """Parse ``"p/q"``, ``"-p"`` or an int into a Fraction.

    Decimal and exponent notation are rejected so that every parameter is
    an exact, locale-free rational.
    """
    if isinstance(text, Fraction):
        return text
    if isinstance(text, bool):
        raise ParseError(f"not a rational: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise ParseError(f"not a rational: {text!r}")
    s = text.strip()
    num, sep, den = s.partition("/")
    try:
        p = _parse_int(num)
        q = _parse_int(den) if sep else 1
    except ValueError:
        raise ParseError(f"not a rational in p/q form: {text!r}") from None
    if q <= 0:
        raise ParseError(f"denominator must be positive: {text!r}")
    return Fraction(p, q)


def _parse_int(s: str) -> int:
    s = s.strip()
    body = s[1:] if s[:1] in "+-" else s
    if not body.isdigit() or not body.isascii():
        raise ValueError(s)
    return int(s)


def parse_rational_list(text: str) -> list[Fraction]:
    """Comma-separated rationals; the empty string is the empty list."""
    if text is None or not text.strip():
        return []
    return [parse_rational(part) for part in text.split(",")]


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def is_integer(x: Fraction) -> bool:
    return Fraction(x).denominator == 1


def is_nonpositive_integer(x: Fraction) -> bool:
    x = Fraction(x)
    return x.denominator == 1 and x <= 0


def factorial_exact(n: int) -> Fraction:
    if n < 0:
        raise ValueError("factorial of a negative integer")
    return Fraction(math.factorial(n))


def rising(alpha: Fraction, n: int) -> Fraction:
    """alpha (alpha+1) ... (alpha+n-1) for n >= 0; always defined."""
    if n < 0:
        raise ValueError("rising product needs n >= 0")
    alpha = Fraction(alpha)
    if alpha.denominator == 1:
        a = alpha.numerator
        if a > 0:
            return Fraction(math.factorial(a + n - 1) // math.factorial(a - 1))
        if a + n - 1 >= 0:
            return Fraction(0)
    p, q = alpha.numerator, alpha.denominator
    num = 1
    for i in range(n):
        num *= p + i * q
    return Fraction(num, q**n)


def pochhammer_exact(alpha: RationalLike, p: int):
    """Pochhammer symbol (alpha)_p = Gamma(alpha+p)/Gamma(alpha).

    Returns a Fraction, or ``POLE`` when the Gamma quotient is undefined.

    >>> pochhammer_exact(Fraction(1, 2), 3)
    Fraction(15, 8)
    >>> pochhammer_exact(-3, 5)
    Fraction(0, 1)
    >>> pochhammer_exact(3, -3)
    POLE
    """
    alpha = Fraction(alpha)
    if p == 0:
        return Fraction(1)
    if p > 0:
        if is_nonpositive_integer(alpha):
            k, n = -alpha.numerator, p
            if n > k:
                return Fraction(0)
            return Fraction((-1) ** n * math.factorial(k), math.factorial(k - n))
        return rising(alpha, p)
    n = -p
    if alpha.denominator == 1:
        # Gamma(alpha) is a pole, or Gamma(alpha - n) is.
        if alpha <= 0 or n >= alpha:
            return POLE
    return Fraction((-1) ** n) / rising(1 - alpha, n)


def pochhammer_negint_ratio(m: int, l: int, r: int) -> Fraction:
    """lim_{eps->0} (-m+eps)_r / (-l+eps)_r for l >= m and r >= l+1.

    Both products contain exactly one vanishing factor (index m and l
    respectively); after cancelling eps the remaining factors are signed
    factorials.
    """
    if m < 0 or l < m or r <= l:
        raise ValueError(f"need 0 <= m <= l < r, got m={m}, l={l}, r={r}")
    num = math.factorial(m) * math.factorial(r - 1 - m)
    den = math.factorial(l) * math.factorial(r - 1 - l)
    sign = -1 if (l - m) % 2 else 1
    return Fraction(sign * num, den)
