import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from clausen.errors import ParseError
from clausen.rational import (
    POLE,
    factorial_exact,
    format_rational,
    is_pole,
    parse_rational,
    parse_rational_list,
    pochhammer_exact,
    pochhammer_negint_ratio,
    rising,
)

from conftest import rationals


@pytest.mark.parametrize(
    "alpha, p, expected",
    [
        (Fraction(7, 3), 0, Fraction(1)),
        (-3, 5, Fraction(0)),
        (-3, 2, Fraction(6)),
        (Fraction(1, 2), 3, Fraction(15, 8)),
        (3, -1, Fraction(1, 2)),
        (Fraction(1, 2), -2, Fraction(4, 3)),
    ],
)
def test_pochhammer_cases(alpha, p, expected):
    assert pochhammer_exact(alpha, p) == expected


@pytest.mark.parametrize("alpha, p", [(3, -3), (3, -5), (0, -1), (-2, -1), (1, -1)])
def test_pochhammer_poles(alpha, p):
    assert pochhammer_exact(alpha, p) is POLE
    assert is_pole(pochhammer_exact(alpha, p))


def gamma_quotient(alpha: Fraction, p: int):
    """Gamma(alpha+p)/Gamma(alpha) straight from mpmath, with a common-shift limit at poles."""
    with mpmath.workdps(60):
        a = mpmath.mpf(alpha.numerator) / alpha.denominator
        if alpha.denominator == 1 and alpha <= 0:
            eps = mpmath.mpf(10) ** -30
            return mpmath.gamma(a + p + eps) / mpmath.gamma(a + eps)
        return mpmath.gamma(a + p) / mpmath.gamma(a)


@given(rationals(), st.integers(-8, 8))
def test_pochhammer_matches_gamma_quotient(alpha, p):
    got = pochhammer_exact(alpha, p)
    integer_pole = alpha.denominator == 1 and p < 0 and (alpha <= 0 or alpha + p <= 0)
    if integer_pole:
        assert got is POLE
        return
    expected = gamma_quotient(alpha, p)
    assert got is not POLE
    if got == 0:
        assert abs(expected) < 1e-20
    else:
        assert abs(float(got) - expected) <= 1e-12 * abs(expected)


@given(st.integers(1, 30), st.integers(0, 30))
def test_positive_integer_base_is_factorial_quotient(a, n):
    assert pochhammer_exact(a, n) == Fraction(math.factorial(a + n - 1), math.factorial(a - 1))


@given(rationals(), st.integers(-6, 6))
def test_recurrence(alpha, p):
    here, nxt = pochhammer_exact(alpha, p), pochhammer_exact(alpha, p + 1)
    assume(here is not POLE and nxt is not POLE)
    assert nxt == here * (alpha + p)


@given(rationals(), st.integers(0, 6), st.integers(0, 6))
def test_splitting(alpha, p, q):
    whole, left, right = pochhammer_exact(alpha, p + q), pochhammer_exact(alpha, p), pochhammer_exact(alpha + p, q)
    assume(POLE not in (whole, left, right))
    assert whole == left * right


@given(st.integers(0, 15), st.data())
def test_negative_integer_case_agrees_with_product(k, data):
    n = data.draw(st.integers(0, k))
    product = Fraction(1)
    for i in range(n):
        product *= -k + i
    assert pochhammer_exact(-k, n) == product == Fraction((-1) ** n * math.factorial(k), math.factorial(k - n))


@pytest.mark.parametrize("m, l, r, expected", [(1, 2, 3, Fraction(-1, 2)), (0, 1, 2, Fraction(-1)), (2, 2, 3, Fraction(1))])
def test_negint_ratio_examples(m, l, r, expected):
    assert pochhammer_negint_ratio(m, l, r) == expected


@given(st.integers(0, 6), st.integers(0, 6), st.integers(1, 6))
def test_negint_ratio_is_the_common_shift_limit(m, extra, gap):
    l, r = m + extra, m + extra + gap
    with mpmath.workdps(60):
        eps = mpmath.mpf(10) ** -30
        oracle = mpmath.rf(-m + eps, r) / mpmath.rf(-l + eps, r)
        got = pochhammer_negint_ratio(m, l, r)
        assert abs(mpmath.mpf(got.numerator) / got.denominator - oracle) <= 1e-20 * max(1, abs(oracle))


@given(st.integers(0, 6), st.integers(0, 6), st.data())
def test_in_range_ratio_is_exactly_zero(m, extra, data):
    l = m + extra
    assume(l > m)
    r = data.draw(st.integers(m + 1, l))
    assert pochhammer_exact(-m, r) == 0
    assert pochhammer_exact(-l, r) != 0


def test_negint_ratio_rejects_bad_ranges():
    with pytest.raises(ValueError):
        pochhammer_negint_ratio(2, 1, 3)
    with pytest.raises(ValueError):
        pochhammer_negint_ratio(1, 2, 2)


@pytest.mark.parametrize("n, expected", [(0, 1), (5, 120), (12, 479001600)])
def test_factorial(n, expected):
    assert factorial_exact(n) == expected


def test_factorial_oracle():
    acc = 1
    for n in range(1, 30):
        acc *= n
        assert factorial_exact(n) == acc


@pytest.mark.parametrize("text, value", [("3/4", Fraction(3, 4)), ("-5", Fraction(-5)), (" 6/4 ", Fraction(3, 2)), ("-1/3", Fraction(-1, 3))])
def test_parse(text, value):
    assert parse_rational(text) == value


@pytest.mark.parametrize("text", ["0.5", "1e3", "1/0", "a/b", "", "1/-2", "3//4"])
def test_parse_rejects(text):
    with pytest.raises(ParseError):
        parse_rational(text)


@given(rationals(1000))
def test_format_round_trip(x):
    text = format_rational(x)
    assert parse_rational(text) == x
    assert "/" not in text or x.denominator != 1
    assert x.denominator > 0 and math.gcd(x.numerator, x.denominator) == 1


def test_zero_is_canonical():
    assert format_rational(Fraction(0, 7)) == "0"
    assert parse_rational("0/5") == Fraction(0, 1)


def test_parse_list():
    assert parse_rational_list("-1,1/2, 3") == [Fraction(-1), Fraction(1, 2), Fraction(3)]
    assert parse_rational_list("") == []


@given(rationals(), st.integers(0, 12))
def test_rising_matches_naive_product(alpha, n):
    expected = Fraction(1)
    for i in range(n):
        expected *= alpha + i
    assert rising(alpha, n) == expected
