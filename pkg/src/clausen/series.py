"""Generalized hypergeometric series pFq: exact, truncated and numeric.

A series is described by a :class:`HypergeometricSpec`.  Exact evaluation
(truncated or terminating) is done in ``Fraction`` arithmetic.  Numeric
evaluation of non-terminating series sums the terms as fixed-point big
integers and then either stops with a rigorous geometric bound (|z| < 1 or
p <= q) or, on the unit circle, extrapolates the partial sums in the known
exponents of their algebraic tail.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterator, Optional, Sequence

from ._mp import hp
from .errors import (
    MaxTermsExceeded,
    NotConvergent,
    NotTerminating,
    PoleInRange,
    ReversalInapplicable,
    TailDivergent,
)
from .rational import (
    format_rational,
    is_nonpositive_integer,
    pochhammer_negint_ratio,
    rising,
)

# Fixed-point scale of numeric partial sums, in bits (about 96 digits).
FIXED_BITS = 320

RICHARDSON_LEVELS = 8


def _frac_tuple(values) -> tuple:
    return tuple(Fraction(v) for v in values)


@dataclass(frozen=True)
class HypergeometricSpec:
    """pFq[numerator; denominator; z], optionally truncated after m+1 terms."""

    numerator: tuple = ()
    denominator: tuple = ()
    z: Fraction = Fraction(1)
    truncation: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "numerator", _frac_tuple(self.numerator))
        object.__setattr__(self, "denominator", _frac_tuple(self.denominator))
        object.__setattr__(self, "z", Fraction(self.z))
        if self.truncation is not None and self.truncation < 0:
            raise ValueError("truncation order must be nonnegative")

    @property
    def p(self) -> int:
        return len(self.numerator)

    @property
    def q(self) -> int:
        return len(self.denominator)

    def truncated(self, m: Optional[int]) -> "HypergeometricSpec":
        return HypergeometricSpec(self.numerator, self.denominator, self.z, m)

    def __str__(self):
        num = ",".join(format_rational(a) for a in self.numerator)
        den = ",".join(format_rational(b) for b in self.denominator)
        s = f"{self.p}F{self.q}[{num}; {den}; {format_rational(self.z)}]"
        if self.truncation is not None:
            s += f"_{self.truncation}"
        return s

    def as_dict(self) -> dict:
        return {
            "numerator": [format_rational(a) for a in self.numerator],
            "denominator": [format_rational(b) for b in self.denominator],
            "z": format_rational(self.z),
            "truncation": self.truncation,
        }


def terminating_order(spec: HypergeometricSpec) -> Optional[int]:
    """N for the smallest numerator -N in Z_0^-, or None."""
    orders = [-a.numerator for a in spec.numerator if is_nonpositive_integer(a)]
    return min(orders) if orders else None


def first_pole(spec: HypergeometricSpec, upto: int) -> Optional[int]:
    """Smallest n <= upto at which some (b)_n vanishes, else None."""
    poles = [
        1 - b.numerator
        for b in spec.denominator
        if is_nonpositive_integer(b) and 1 - b.numerator <= upto
    ]
    return min(poles) if poles else None


def _check_no_pole(spec: HypergeometricSpec, upto: int):
    n = first_pole(spec, upto)
    if n is not None:
        raise PoleInRange(f"denominator Pochhammer vanishes at n={n} <= {upto} in {spec}")


def exact_terms(spec: HypergeometricSpec, upto: int) -> Iterator[Fraction]:
    """Terms n = 0..upto of the series, exactly."""
    _check_no_pole(spec, upto)
    t = Fraction(1)
    for n in range(upto + 1):
        yield t
        if n == upto:
            break
        num = Fraction(1)
        for a in spec.numerator:
            num *= a + n
        den = Fraction(n + 1)
        for b in spec.denominator:
            den *= b + n
        t = t * num * spec.z / den


def eval_truncated(spec: HypergeometricSpec, m: Optional[int] = None) -> Fraction:
    """Exact partial sum of the first m+1 terms (m defaults to spec.truncation)."""
    if m is None:
        m = spec.truncation
    if m is None:
        raise ValueError(f"no truncation order given for {spec}")
    if m < 0:
        raise ValueError("truncation order must be nonnegative")
    return sum(exact_terms(spec, m), Fraction(0))


def eval_terminating(spec: HypergeometricSpec) -> Fraction:
    """Exact value of a hypergeometric polynomial (some numerator is -N)."""
    n = terminating_order(spec)
    if n is None:
        raise NotTerminating(f"no nonpositive-integer numerator in {spec}")
    return eval_truncated(spec, n)


def eval_exact(spec: HypergeometricSpec) -> Fraction:
    """Truncated sum if a truncation is set, otherwise the terminating sum."""
    if spec.truncation is not None:
        return eval_truncated(spec)
    return eval_terminating(spec)


# -- reversal ---------------------------------------------------------------


@dataclass(frozen=True)
class Reversal:
    """``prefactor * (value of spec)`` equals the value of the original series."""

    prefactor: Fraction
    spec: HypergeometricSpec

    def value(self) -> Fraction:
        return self.prefactor * eval_exact(self.spec)


def _product_rising(params, m: int) -> Fraction:
    out = Fraction(1)
    for a in params:
        out *= rising(a, m)
    return out


def reverse_truncated(spec: HypergeometricSpec, m: Optional[int] = None) -> Reversal:
    """Rewrite a truncated pFq as prefactor times a reversed (q+2)Fp.

    The n-th term of the reversed series is the (m-n)-th term of the
    original divided by the last one, so the last term must not vanish.
    """
    if m is None:
        m = spec.truncation
    if m is None:
        raise ValueError(f"no truncation order given for {spec}")
    if spec.z == 0:
        raise ReversalInapplicable("argument z = 0 has no reciprocal")
    _check_no_pole(spec, m)
    num_m = _product_rising(spec.numerator, m)
    den_m = _product_rising(spec.denominator, m)
    if num_m == 0:
        raise ReversalInapplicable(f"last term of {spec.truncated(m)} vanishes")
    new_num = [Fraction(-m)] + [1 - b - m for b in spec.denominator] + [Fraction(1)]
    new_den = [1 - a - m for a in spec.numerator]
    new_z = Fraction((-1) ** (spec.p + spec.q + 1)) / spec.z
    reversed_spec = HypergeometricSpec(new_num, new_den, new_z, m)
    if first_pole(reversed_spec, m) is not None:
        raise ReversalInapplicable(f"reversed series {reversed_spec} has a pole in range")
    prefactor = num_m * spec.z**m / (den_m * math.factorial(m))
    return Reversal(prefactor, reversed_spec)


def reverse_terminating(spec: HypergeometricSpec) -> Reversal:
    """Reverse a terminating p+1Fq[-m, (alpha); (beta); z] into a q+1Fp."""
    m = terminating_order(spec)
    if m is None:
        raise NotTerminating(f"no nonpositive-integer numerator in {spec}")
    if spec.z == 0:
        raise ReversalInapplicable("argument z = 0 has no reciprocal")
    _check_no_pole(spec, m)
    idx = next(i for i, a in enumerate(spec.numerator) if a == -m)
    alphas = spec.numerator[:idx] + spec.numerator[idx + 1:]
    num_m = _product_rising(alphas, m)
    den_m = _product_rising(spec.denominator, m)
    if num_m == 0:
        raise ReversalInapplicable(f"last term of {spec} vanishes")
    new_num = [Fraction(-m)] + [1 - b - m for b in spec.denominator]
    new_den = [1 - a - m for a in alphas]
    new_z = Fraction((-1) ** (len(alphas) + spec.q)) / spec.z
    reversed_spec = HypergeometricSpec(new_num, new_den, new_z)
    if first_pole(reversed_spec, m) is not None:
        raise ReversalInapplicable(f"reversed series {reversed_spec} has a pole in range")
    prefactor = num_m * (-spec.z) ** m / den_m
    return Reversal(prefactor, reversed_spec)


def reverse_finite_sum(coefficients: Sequence) -> list:
    """Phi(m-n) for n = 0..m; summing it reproduces the original total."""
    return list(reversed(coefficients))


# -- convergence ------------------------------------------------------------


class Regime(str, Enum):
    POLYNOMIAL = "polynomial"
    ENTIRE = "entire"
    UNIT_DISC = "unit-disc"
    BOUNDARY_CONVERGENT = "boundary-convergent"
    BOUNDARY_DIVERGENT = "boundary-divergent"
    DIVERGENT = "divergent"


@dataclass(frozen=True)
class ConvergenceInfo:
    omega: Fraction
    regime: Regime

    @property
    def convergent(self) -> bool:
        return self.regime not in (Regime.BOUNDARY_DIVERGENT, Regime.DIVERGENT)


def convergence_info(spec: HypergeometricSpec) -> ConvergenceInfo:
    """omega = sum(denominator) - sum(numerator), and the convergence regime."""
    omega = sum(spec.denominator, Fraction(0)) - sum(spec.numerator, Fraction(0))
    n = terminating_order(spec)
    blocked = n is not None and first_pole(spec, n) is not None
    if spec.truncation is not None or spec.z == 0 or (n is not None and not blocked):
        regime = Regime.POLYNOMIAL
    elif spec.p <= spec.q:
        regime = Regime.ENTIRE
    elif spec.p > spec.q + 1:
        regime = Regime.DIVERGENT
    elif abs(spec.z) < 1:
        regime = Regime.UNIT_DISC
    elif abs(spec.z) > 1:
        regime = Regime.DIVERGENT
    elif spec.z == 1:
        regime = Regime.BOUNDARY_CONVERGENT if omega > 0 else Regime.BOUNDARY_DIVERGENT
    else:
        regime = Regime.BOUNDARY_CONVERGENT if omega > -1 else Regime.BOUNDARY_DIVERGENT
    return ConvergenceInfo(omega, regime)


# -- numeric summation ------------------------------------------------------


@dataclass(frozen=True)
class SeriesValue:
    """Numeric series value with its error estimate.

    ``rigorous`` is True when ``error`` is a proven bound on the discarded
    remainder (geometric ratio bound) rather than an extrapolation estimate.
    """

    value: object
    error: object
    terms: int
    rigorous: bool
    method: str = field(default="direct")

    def __float__(self):
        return float(self.value)


class _FixedPointTerms:
    """Terms t_n * 2^FIXED_BITS as Python ints, generated by the term ratio."""

    def __init__(self, spec: HypergeometricSpec, scale: int = 1):
        # (a+n) = (p + n q)/q; collect all denominators into one integer.
        self.num = [(a.numerator, a.denominator) for a in spec.numerator]
        self.den = [(b.numerator, b.denominator) for b in spec.denominator]
        qn = math.prod(q for _, q in self.num)
        qd = math.prod(q for _, q in self.den)
        self.const_num = qd * spec.z.numerator
        self.const_den = qn * spec.z.denominator
        self.scale = scale

    def __iter__(self):
        t = self.scale << FIXED_BITS
        n = 0
        while True:
            yield n, t
            a = self.const_num
            for p, q in self.num:
                a *= p + n * q
            b = self.const_den * (n + 1)
            for p, q in self.den:
                b *= p + n * q
            if b < 0:
                a, b = -a, -b
            t = (t * a) // b
            n += 1


def _fixed_to_mpf(x: int):
    return hp.ldexp(hp.mpf(x), -FIXED_BITS)


def _max_param(spec: HypergeometricSpec) -> Fraction:
    params = spec.numerator + spec.denominator
    return max((abs(x) for x in params), default=Fraction(0))


def _ratio_bound(spec: HypergeometricSpec, r: int) -> Optional[float]:
    """Upper bound on |t_{n+1}/t_n| valid for every n >= r, or None."""
    dens = list(spec.denominator) + [Fraction(1)]
    if any(r + b <= 0 for b in dens):
        return None
    rho = abs(float(spec.z))
    nums = list(spec.numerator)
    for i, b in enumerate(dens):
        if i < len(nums):
            rho *= 1.0 + float(abs(nums[i] - b)) / float(r + b)
        else:
            rho /= float(r + b)
    return rho


def _sum_polynomial(spec: HypergeometricSpec, upto: int) -> SeriesValue:
    _check_no_pole(spec, upto)
    s = 0
    for n, t in _FixedPointTerms(spec):
        s += t
        if n == upto:
            break
    rounding = hp.ldexp(hp.mpf(upto + 1), -FIXED_BITS)
    return SeriesValue(_fixed_to_mpf(s), rounding, upto + 1, True, "polynomial")


def _sum_geometric(spec: HypergeometricSpec, rel_tol, max_terms: int) -> SeriesValue:
    guard = math.ceil(_max_param(spec)) + 1
    tol = Fraction(rel_tol) if not isinstance(rel_tol, Fraction) else rel_tol
    s = 0
    peak = 0  # largest partial sum; the tolerance is relative to it under cancellation
    small = 0
    for n, t in _FixedPointTerms(spec):
        s += t
        peak = max(peak, abs(s))
        if n >= max_terms:
            raise MaxTermsExceeded(f"{spec}: no convergence within {max_terms} terms")
        if peak != 0 and abs(t) < tol * peak:
            small += 1
        else:
            small = 0
        if small >= 3 and n > guard:
            rho = _ratio_bound(spec, n)
            if rho is not None and rho < 1:
                rho = Fraction(rho)
                bound = abs(t) * rho / (1 - rho)
                if bound <= tol * peak:
                    err = hp.ldexp(hp.mpf(bound.numerator) / bound.denominator, -FIXED_BITS)
                    return SeriesValue(_fixed_to_mpf(s), err, n + 1, True, "geometric")
        if t == 0 and n > guard:
            return SeriesValue(_fixed_to_mpf(s), hp.zero, n + 1, True, "geometric")


def _partial_sums(spec: HypergeometricSpec, checkpoints: Sequence[int]) -> list:
    out = []
    s = 0
    it = iter(checkpoints)
    target = next(it)
    for n, t in _FixedPointTerms(spec):
        s += t
        if n == target:
            out.append(_fixed_to_mpf(s))
            target = next(it, None)
            if target is None:
                return out


def _richardson(sums: Sequence, ratio: int, first_exponent):
    """Eliminate error terms N^-(e0), N^-(e0+1), ... from partial sums S_N.

    ``sums`` are taken at N, ratio*N, ratio^2*N, ...  Returns the final
    extrapolant and the gap to the best once-less-extrapolated value.
    """
    table = [list(sums)]
    for j in range(1, len(sums)):
        f = hp.power(ratio, first_exponent + j - 1)
        prev = table[-1]
        table.append([(f * prev[i + 1] - prev[i]) / (f - 1) for i in range(len(prev) - 1)])
    best = table[-1][0]
    return best, abs(best - table[-2][-1])


def _sum_boundary(spec: HypergeometricSpec, omega: Fraction, rel_tol, max_terms: int) -> SeriesValue:
    """p = q+1 at z = +-1: extrapolate partial sums in N^-(e0 + j)."""
    first_exponent = hp.mpf(omega.numerator) / omega.denominator
    if spec.z == -1:
        first_exponent += 1
    n0 = max(32, 4 * math.ceil(_max_param(spec)))
    n0 += n0 % 2
    while True:
        checkpoints = [n0 * 2**i for i in range(RICHARDSON_LEVELS)]
        if checkpoints[-1] > max_terms:
            raise MaxTermsExceeded(
                f"{spec}: extrapolation did not reach rel_tol={rel_tol} within {max_terms} terms"
            )
        sums = _partial_sums(spec, checkpoints)
        value, err = _richardson(sums, 2, first_exponent)
        # measured against the partial sums too, so a vanishing sum can stop
        scale = max(abs(value), max(abs(x) for x in sums))
        if err <= hp.mpf(rel_tol) * scale:
            return SeriesValue(value, err, checkpoints[-1] + 1, False, "richardson")
        n0 *= 2


def eval_nonterminating_float(
    spec: HypergeometricSpec, rel_tol=1e-15, max_terms: int = 10**6
) -> SeriesValue:
    """Numeric value of the series (finite or infinite) at working precision."""
    if spec.truncation is not None:
        return _sum_polynomial(spec, spec.truncation)
    info = convergence_info(spec)
    if info.regime is Regime.POLYNOMIAL:
        if spec.z == 0:
            return SeriesValue(hp.one, hp.zero, 1, True, "polynomial")
        return _sum_polynomial(spec, terminating_order(spec))
    if not info.convergent:
        raise NotConvergent(f"{spec} does not converge (regime {info.regime.value}, omega={info.omega})")
    if any(is_nonpositive_integer(b) for b in spec.denominator):
        raise PoleInRange(f"non-terminating {spec} has a nonpositive-integer denominator")
    if info.regime is Regime.BOUNDARY_CONVERGENT:
        return _sum_boundary(spec, info.omega, rel_tol, max_terms)
    return _sum_geometric(spec, rel_tol, max_terms)


# -- truncated part plus tail -----------------------------------------------


@dataclass(frozen=True)
class SplitResult:
    truncated_part: Fraction
    tail_estimate: object
    tail_terms_used: int
    tail_error_bound: object
    tail_rigorous: bool = True

    @property
    def total(self):
        return hp.mpf(self.truncated_part.numerator) / self.truncated_part.denominator + self.tail_estimate


def _split_parameters(spec: HypergeometricSpec):
    if spec.p != 3 or spec.q != 2:
        raise ValueError(f"split needs a 3F2, got {spec}")
    num = list(spec.numerator)
    den = list(spec.denominator)
    negs = sorted((a for a in num if is_nonpositive_integer(a)), reverse=True)
    if not negs:
        raise ValueError(f"no nonpositive-integer numerator in {spec}")
    m_par = negs[0]
    m = -m_par.numerator
    den_negs = [b for b in den if is_nonpositive_integer(b) and -b.numerator > m]
    if not den_negs:
        raise ValueError(f"no denominator -l with l > {m} in {spec}")
    l_par = max(den_negs)
    l = -l_par.numerator
    num.remove(m_par)
    den.remove(l_par)
    alpha, beta = num
    (gamma,) = den
    for name, v in (("alpha", alpha), ("beta", beta), ("gamma", gamma)):
        if is_nonpositive_integer(v):
            raise ValueError(f"{name} = {v} must not be a nonpositive integer")
    return m, l, alpha, beta, gamma


def split_negative_denominator(
    spec: HypergeometricSpec, rel_tol=1e-15, max_terms: int = 10**6
) -> SplitResult:
    """3F2[-m, alpha, beta; -l, gamma; z] as truncated part plus infinite tail.

    Terms with m < r <= l vanish; tail terms r >= l+1 use the common-shift
    limit of (-m)_r/(-l)_r.  The tail is t_{l+1} times the ordinary series
    3F2[l+1-m, l+1+alpha, l+1+beta; l+1+gamma, l+2; z].
    """
    m, l, alpha, beta, gamma = _split_parameters(spec)
    z = spec.z
    truncated = eval_truncated(spec.truncated(None), m)
    if z == 0:
        return SplitResult(truncated, hp.zero, 0, hp.zero)
    r0 = l + 1
    first = (
        pochhammer_negint_ratio(m, l, r0)
        * rising(alpha, r0)
        * rising(beta, r0)
        * z**r0
        / (rising(gamma, r0) * math.factorial(r0))
    )
    rest = HypergeometricSpec([r0 - m, r0 + alpha, r0 + beta], [r0 + gamma, r0 + 1], z)
    info = convergence_info(rest)
    if not info.convergent:
        raise TailDivergent(f"tail series {rest} diverges (omega={info.omega})")
    if first == 0:
        return SplitResult(truncated, hp.zero, 1, hp.zero)
    sv = eval_nonterminating_float(rest, rel_tol=rel_tol, max_terms=max_terms)
    scale = hp.mpf(first.numerator) / first.denominator
    return SplitResult(truncated, scale * sv.value, sv.terms, abs(scale) * sv.error, sv.rigorous)
