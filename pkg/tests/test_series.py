from fractions import Fraction

import mpmath
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from clausen.errors import (
    MaxTermsExceeded,
    NotConvergent,
    NotTerminating,
    PoleInRange,
    ReversalInapplicable,
    TailDivergent,
)
from clausen.series import (
    HypergeometricSpec as H,
    Regime,
    convergence_info,
    eval_exact,
    eval_nonterminating_float,
    eval_terminating,
    eval_truncated,
    exact_terms,
    reverse_finite_sum,
    reverse_terminating,
    reverse_truncated,
    split_negative_denominator,
)

from conftest import non_integers, rationals

F = Fraction


def brute_sum(num, den, z, m):
    """Independent term-by-term partial sum from the pFq definition."""
    total = F(0)
    for n in range(m + 1):
        t = F(z) ** n
        for a in num:
            for i in range(n):
                t *= F(a) + i
        for b in den:
            for i in range(n):
                t /= F(b) + i
        for i in range(1, n + 1):
            t /= i
        total += t
    return total


# -- exact evaluation -------------------------------------------------------


def test_truncated_examples():
    assert eval_truncated(H([-1, 1, 1], [-2, 1], 1), 1) == F(3, 2)
    assert eval_truncated(H([-1, 1, 1], [-2, F(3, 2)], 1), 1) == F(4, 3)
    assert eval_truncated(H([F(1, 3), 7], [F(2, 5)], F(-9, 4)), 0) == 1


def test_truncation_field_is_default_order():
    assert eval_truncated(H([-1, 1, 1], [-2, 1], 1, 1)) == F(3, 2)


def test_terminating_examples():
    assert eval_terminating(H([-2, 1], [1], 1)) == 0
    assert eval_terminating(H([-1, 2, 3], [4, 5], 1)) == F(7, 10)
    assert eval_terminating(H([-3], [], 1)) == 0


def test_pole_in_range():
    with pytest.raises(PoleInRange):
        eval_truncated(H([1, 1], [-1], 1), 3)
    # -l with l >= m is fine
    assert eval_truncated(H([1, 1], [-3], 1), 3) == brute_sum([1, 1], [-3], 1, 3)


def test_not_terminating():
    with pytest.raises(NotTerminating):
        eval_terminating(H([F(1, 2), 1], [2], 1))


@given(st.lists(rationals(), max_size=3), st.lists(non_integers(), max_size=3), rationals(), st.integers(0, 10))
def test_truncated_matches_definition(num, den, z, m):
    assert eval_truncated(H(num, den, z), m) == brute_sum(num, den, z, m)


@given(st.lists(rationals(), max_size=3), st.lists(non_integers(), max_size=3), rationals(), st.integers(1, 10))
def test_consecutive_truncations_differ_by_one_term(num, den, z, m):
    spec = H(num, den, z)
    last = list(exact_terms(spec, m))[-1]
    assert eval_truncated(spec, m) - eval_truncated(spec, m - 1) == last


@given(st.integers(0, 8), st.lists(rationals(), max_size=2), st.lists(non_integers(), max_size=2), rationals())
def test_terminating_equals_truncated_at_order(n, num, den, z):
    assume(all(not (a.denominator == 1 and a <= 0 and -a < n) for a in num))
    spec = H([-n] + num, den, z)
    assert eval_terminating(spec) == eval_truncated(spec, n)


# -- reversal ---------------------------------------------------------------


def test_reverse_truncated_examples():
    rev = reverse_truncated(H([-1, 1, 1], [-2, 1], 1), 1)
    assert rev.value() == F(3, 2)
    spec = H([-2, 1], [3, 4], 1)
    assert reverse_truncated(spec, 2).value() == eval_truncated(spec, 2)
    rev0 = reverse_truncated(H([F(1, 2)], [F(3, 7)], 5), 0)
    assert rev0.prefactor == 1 and eval_exact(rev0.spec) == 1 and rev0.value() == 1


def test_reverse_terminating_examples():
    assert reverse_terminating(H([-2, 1], [1], 1)).value() == 0
    assert reverse_terminating(H([-1, 2, 3], [4, 5], 1)).value() == F(7, 10)
    spec = H([-3, F(1, 2)], [2], 1)
    assert reverse_terminating(spec).value() == eval_terminating(spec)


def test_reversal_refuses_zero_argument():
    with pytest.raises(ReversalInapplicable):
        reverse_truncated(H([1], [2], 0), 2)


@given(st.lists(non_integers(), max_size=3), st.lists(non_integers(), max_size=3),
       rationals().filter(bool), st.integers(0, 8))
def test_reverse_truncated_identity(num, den, z, m):
    spec = H(num, den, z)
    assert reverse_truncated(spec, m).value() == eval_truncated(spec, m)


@given(st.lists(non_integers(), max_size=2), st.lists(non_integers(), max_size=2),
       rationals().filter(bool), st.integers(1, 6))
def test_reversal_involution(num, den, z, m):
    spec = H(num, den, z)
    once = reverse_truncated(spec, m)
    try:
        twice = reverse_truncated(once.spec, m)
    except ReversalInapplicable:
        assume(False)
    assert once.prefactor * twice.value() == eval_truncated(spec, m)


@given(st.integers(0, 8), st.lists(non_integers(), max_size=3), st.lists(non_integers(), max_size=3),
       rationals().filter(bool))
def test_reverse_terminating_identity(n, num, den, z):
    spec = H([-n] + num, den, z)
    assert reverse_terminating(spec).value() == eval_terminating(spec)


@given(st.lists(rationals(), max_size=12))
def test_finite_sum_reversal(coefficients):
    assert sum(reverse_finite_sum(coefficients), F(0)) == sum(coefficients, F(0))


# -- convergence ------------------------------------------------------------


@pytest.mark.parametrize(
    "spec, omega, regime",
    [
        (H([F(1, 2)] * 3, [1, 1], 1), F(1, 2), Regime.BOUNDARY_CONVERGENT),
        (H([F(1, 3), F(2, 3)], [F(5, 4), 2], 7), None, Regime.ENTIRE),
        (H([1, 1], [2], 1), F(0), Regime.BOUNDARY_DIVERGENT),
        (H([1, 1], [2], F(1, 2)), None, Regime.UNIT_DISC),
        (H([1, 1], [2], 2), None, Regime.DIVERGENT),
        (H([1, 1, 1], [2], F(1, 2)), None, Regime.DIVERGENT),
        (H([1, 1], [2], -1), F(0), Regime.BOUNDARY_CONVERGENT),
        (H([1, 1], [1], -1), F(-1), Regime.BOUNDARY_DIVERGENT),
        (H([-3, 1, 1], [2, 2], 5), None, Regime.POLYNOMIAL),
        # the pole at n = 2 blocks termination, so the omega test decides
        (H([-3, 1, 1], [-1, 2], 1), F(2), Regime.BOUNDARY_CONVERGENT),
    ],
)
def test_convergence_info(spec, omega, regime):
    info = convergence_info(spec)
    assert info.regime is regime
    if omega is not None:
        assert info.omega == omega


def test_blocked_polynomial_has_a_pole():
    with pytest.raises(PoleInRange):
        eval_nonterminating_float(H([-3, 1, 1], [-1, 2], 1))


def test_omega_formula_example():
    # omega = 2 - 3/2 for three halves over two ones
    assert convergence_info(H([F(1, 2)] * 3, [1, 1], 1)).omega == F(1, 2)


# -- numeric summation ------------------------------------------------------


def test_watson_value_at_unit_argument():
    sv = eval_nonterminating_float(H([F(1, 2)] * 3, [1, 1], 1), rel_tol=1e-20)
    with mpmath.workdps(40):
        oracle = mpmath.pi / mpmath.gamma(mpmath.mpf(3) / 4) ** 4
    assert abs(sv.value - oracle) <= 1e-18 * oracle
    assert sv.error <= 1e-19 * oracle


def test_log_and_exp():
    with mpmath.workdps(40):
        assert abs(eval_nonterminating_float(H([1, 1], [2], F(1, 2)), rel_tol=1e-32).value - 2 * mpmath.log(2)) < 1e-30
        assert abs(eval_nonterminating_float(H([], [], 1), rel_tol=1e-32).value - mpmath.e) < 1e-30
        assert abs(eval_nonterminating_float(H([1, 1], [2], -1), rel_tol=1e-20).value - mpmath.log(2)) < 1e-18


def test_geometric_bound_is_rigorous():
    sv = eval_nonterminating_float(H([1, 1], [2], F(1, 2)), rel_tol=1e-25)
    assert sv.rigorous
    with mpmath.workdps(60):
        assert abs(sv.value - 2 * mpmath.log(2)) <= sv.error + mpmath.mpf(10) ** -38


def test_divergent_rejected():
    with pytest.raises(NotConvergent):
        eval_nonterminating_float(H([1, 1], [2], 1))
    with pytest.raises(NotConvergent):
        eval_nonterminating_float(H([1], [], 2))


def test_budget_exhaustion():
    with pytest.raises(MaxTermsExceeded):
        eval_nonterminating_float(H([F(1, 2)] * 3, [1, 1], 1), rel_tol=1e-30, max_terms=500)


@given(st.integers(0, 8), st.lists(rationals(), max_size=2), st.lists(non_integers(), max_size=2), rationals(4))
def test_float_agrees_with_exact_for_polynomials(n, num, den, z):
    spec = H([-n] + num, den, z)
    exact = eval_terminating(spec)
    got = eval_nonterminating_float(spec).value
    with mpmath.workdps(40):
        ref = mpmath.mpf(exact.numerator) / exact.denominator
        assert abs(got - ref) <= 1e-30 * max(1, abs(ref))


@given(st.lists(non_integers(5), min_size=2, max_size=2), non_integers(5), st.sampled_from([F(1, 2), F(-1, 3), F(3, 4)]))
def test_unit_disc_matches_mpmath(num, den, z):
    sv = eval_nonterminating_float(H(num, [den], z), rel_tol=1e-25)
    with mpmath.workdps(60):
        a, b, c, zz = (mpmath.mpf(x.numerator) / x.denominator for x in (num[0], num[1], den, z))
        oracle, t = mpmath.mpf(0), mpmath.mpf(1)
        for n in range(400):
            oracle += t
            t = t * (a + n) * (b + n) * zz / ((c + n) * (n + 1))
        assert abs(sv.value - oracle) <= 1e-22 * max(1, abs(oracle))


# -- split of 3F2[-m, a, b; -l, g; z] ----------------------------------------


def eps_oracle(m, l, alpha, beta, gamma, z, eps=mpmath.mpf(10) ** -20):
    """Sum the shifted series 3F2[-m+eps, a, b; -l+eps, g; z] directly at 80 digits."""
    with mpmath.workdps(80):
        a, b, g, zz = (mpmath.mpf(x.numerator) / x.denominator for x in (alpha, beta, gamma, z))
        e = mpmath.mpf(eps)
        total, t, n = mpmath.mpf(0), mpmath.mpf(1), 0
        while True:
            total += t
            t = t * (-m + e + n) * (a + n) * (b + n) * zz / ((-l + e + n) * (g + n) * (n + 1))
            n += 1
            if n > l + 5 and abs(t) < mpmath.mpf(10) ** -40 * max(1, abs(total)):
                return total


def test_split_example():
    res = split_negative_denominator(H([-1, 1, 1], [-2, 1], F(1, 2)))
    assert res.truncated_part == eval_truncated(H([-1, 1, 1], [-2, 1], F(1, 2)), 1) == F(5, 4)
    assert res.tail_rigorous
    oracle = eps_oracle(1, 2, F(1), F(1), F(1), F(1, 2))
    assert abs(res.total - oracle) <= 1e-8 * abs(oracle)


def test_split_trivial_cases():
    assert split_negative_denominator(H([0, F(1, 3), 2], [-1, F(5, 2)], F(1, 3))).truncated_part == 1
    res = split_negative_denominator(H([-1, 1, 1], [-2, 1], 0))
    assert res.truncated_part == 1 and res.tail_estimate == 0


def test_split_tail_divergence_detected():
    with pytest.raises(TailDivergent):
        split_negative_denominator(H([-1, 1, 1], [-2, 3], 1))


@given(st.integers(0, 4), st.integers(1, 4), non_integers(10), non_integers(10), non_integers(10),
       st.sampled_from([F(1, 2), F(-1, 2), F(1, 3), F(-2, 5), F(1, 7)]))
def test_split_matches_shifted_series(m, gap, alpha, beta, gamma, z):
    l = m + gap
    res = split_negative_denominator(H([-m, alpha, beta], [-l, gamma], z), rel_tol=1e-20)
    oracle = eps_oracle(m, l, alpha, beta, gamma, z)
    assert abs(res.total - oracle) <= 1e-8 * max(abs(oracle), mpmath.mpf(10) ** -30)
    assert res.tail_error_bound <= 1e-15 * max(1, abs(res.total))
