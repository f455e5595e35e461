"""Catalog of Watson, Saalschutz, Whipple and Dixon summation theorems.

Each entry knows its free parameters, how to build the left-hand series,
how to evaluate the printed right-hand side, and its side conditions.
Terminating and truncated entries have Pochhammer-only right-hand sides and
are verified in exact rational arithmetic; Gamma-form entries are verified
numerically.
"""
from __future__ import annotations

import dataclasses
import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Union

from ._mp import hp, to_mpf
from .errors import (
    ClausenError,
    PoleAtNonpositiveInteger,
    PoleInClosedForm,
    SideConditionViolated,
    UnknownEdge,
    UnknownParameter,
    UnknownTheorem,
)
from .gamma import gamma_real, rgamma_real
from .rational import format_rational, is_integer, is_nonpositive_integer, rising
from .series import (
    HypergeometricSpec,
    convergence_info,
    eval_exact,
    eval_nonterminating_float,
    first_pole,
    terminating_order,
)

HALF = Fraction(1, 2)
INTEGER_PARAMS = ("m", "k")
RATIONAL_PARAMS = ("alpha", "beta", "gamma", "delta")

# Relative accuracy requested from numeric series inside float-mode checks.
SERIES_REL_TOL = 1e-14
SERIES_MAX_TERMS = 10**6


@dataclass(frozen=True)
class Binding:
    m: Optional[int] = None
    k: Optional[int] = None
    alpha: Optional[Fraction] = None
    beta: Optional[Fraction] = None
    gamma: Optional[Fraction] = None
    delta: Optional[Fraction] = None

    def replace(self, **changes) -> "Binding":
        return dataclasses.replace(self, **changes)

    def as_dict(self) -> dict:
        out = {}
        for f in dataclasses.fields(self):
            v = getattr(self, f.name)
            if v is None:
                continue
            out[f.name] = v if f.name in INTEGER_PARAMS else format_rational(v)
        return out


def poch(x, n: int) -> Fraction:
    return rising(Fraction(x), n)


def _div(num, den):
    if den == 0:
        raise PoleInClosedForm("vanishing Pochhammer factor in a denominator")
    return num / den


# -- side conditions --------------------------------------------------------

NOT_NONPOS_INT = "not in Z0-"
NOT_INT = "not in Z"
POSITIVE = "> 0"


@dataclass(frozen=True)
class Condition:
    text: str
    expr: Callable[[Binding], Fraction]
    kind: str = NOT_NONPOS_INT

    @property
    def label(self) -> str:
        if self.kind == POSITIVE:
            return f"Re({self.text}) > 0"
        return f"{self.text} {self.kind}"

    def value(self, b: Binding) -> Fraction:
        return Fraction(self.expr(b))

    def holds(self, b: Binding) -> bool:
        v = self.value(b)
        if self.kind == NOT_NONPOS_INT:
            return not is_nonpositive_integer(v)
        if self.kind == NOT_INT:
            return not is_integer(v)
        return v > 0


def nn(text, expr):
    return Condition(text, expr, NOT_NONPOS_INT)


def ni(text, expr):
    return Condition(text, expr, NOT_INT)


def pos(text, expr):
    return Condition(text, expr, POSITIVE)


# -- Gamma products with an exact common-shift limit ------------------------


@dataclass(frozen=True)
class GammaProduct:
    """prod Gamma(num_i) / prod Gamma(den_j), arguments affine in the binding."""

    num: tuple
    den: tuple

    def factors(self):
        return [(f, 1) for f in self.num] + [(f, -1) for f in self.den]

    def evaluate(self, b: Binding):
        out = hp.one
        for f in self.num:
            out *= _gamma(f(b))
        for f in self.den:
            out *= rgamma_real(f(b))
        return out

    def limit(self, b: Binding, perturb) -> Optional[Fraction]:
        """Exact iterated limit as the parameters in ``perturb`` are shifted, or None.

        ``perturb`` is a name or a tuple of names.  The first parameter gets
        the fastest-vanishing shift eps_0, later ones slower shifts
        eps_0 << eps_1 << ..., which is the limit in the first parameter taken
        at generic values of the others, continued to the given point.
        Near a pole Gamma(-n + c eps) ~ (-1)^n / (n! c eps).  Non-pole factors
        whose arguments differ by integers collapse into Pochhammer ratios;
        None means some class of arguments does not cancel, so the value is
        not rational.
        """
        names = (perturb,) if isinstance(perturb, str) else tuple(perturb)
        shifted = [b.replace(**{p: getattr(b, p) + 1}) for p in names]
        coeff = Fraction(1)
        powers = [0] * len(names)
        fixed_zero = False
        classes = defaultdict(list)
        for f, e in self.factors():
            a = Fraction(f(b))
            if is_nonpositive_integer(a):
                rates = [Fraction(f(sb)) - a for sb in shifted]
                scale = max((j for j, r in enumerate(rates) if r != 0), default=None)
                if scale is None:
                    # 1/Gamma at a pole no shift moves is an exact zero
                    if e < 0:
                        fixed_zero = True
                        continue
                    raise PoleInClosedForm(f"Gamma({format_rational(a)}) is not regularised by {', '.join(names)}")
                n = -a.numerator
                coeff *= (Fraction((-1) ** n, math.factorial(n)) / rates[scale]) ** e
                powers[scale] -= e
            elif is_integer(a):
                coeff *= Fraction(math.factorial(a.numerator - 1)) ** e
            else:
                classes[a % 1].append((a, e))
        leading = next((p for p in powers if p != 0), 0)
        if leading > 0 or (fixed_zero and leading == 0):
            return Fraction(0)
        if leading < 0:
            raise PoleInClosedForm("Gamma product diverges in the limit")
        for members in classes.values():
            if sum(e for _, e in members) != 0:
                return None
            base = min(a for a, _ in members)
            for a, e in members:
                coeff *= rising(base, int(a - base)) ** e
        return coeff


def _gamma(x):
    try:
        return gamma_real(x)
    except PoleAtNonpositiveInteger as exc:
        raise PoleInClosedForm(str(exc)) from None


def _sinpi(x: Fraction):
    x = Fraction(x)
    if is_integer(x):
        return hp.zero
    return hp.sinpi(to_mpf(x))


def _cospi(x: Fraction):
    x = Fraction(x)
    if is_integer(x + HALF):
        return hp.zero
    return hp.cospi(to_mpf(x))


def _hp(x):
    return to_mpf(Fraction(x))


# -- right-hand sides -------------------------------------------------------


def _rhs_watson_nt(b):
    a, be, g = b.alpha, b.beta, b.gamma
    return (
        _gamma(HALF) * _gamma(g + HALF) * _gamma((1 + a + be) / 2) * _gamma(g + (1 - a - be) / 2)
        * rgamma_real((1 + a) / 2) * rgamma_real((1 + be) / 2)
        * rgamma_real(g + (1 - a) / 2) * rgamma_real(g + (1 - be) / 2)
    )


def _rhs_saalschutz_nt(b):
    a, be, g, d = b.alpha, b.beta, b.gamma, b.delta
    first = (
        _gamma(g) * _gamma(d) * _gamma(g - a - be) * _gamma(d - a - be)
        * rgamma_real(g - a) * rgamma_real(g - be) * rgamma_real(d - a) * rgamma_real(d - be)
    )
    inner = HypergeometricSpec([g - a, g - be, 1], [g - a - be + 1, g + d - a - be], 1)
    series = eval_nonterminating_float(inner, SERIES_REL_TOL, SERIES_MAX_TERMS).value
    second = (
        _gamma(g) * _gamma(d) * rgamma_real(a) * rgamma_real(be) * rgamma_real(g + d - a - be)
        / _hp(a + be - g)
    )
    return first + second * series


def _rhs_whipple_nt(b):
    a, be, g = b.alpha, b.beta, b.gamma
    return (
        hp.pi * _gamma(g) * _gamma(2 * be - g + 1) / hp.power(2, _hp(2 * be - 1))
        * rgamma_real((a + 2 * be - g + 1) / 2) * rgamma_real((a + g) / 2)
        * rgamma_real((2 - a + 2 * be - g) / 2) * rgamma_real((1 - a + g) / 2)
    )


DIXON_GAMMA = GammaProduct(
    num=(
        lambda b: 1 + b.alpha / 2,
        lambda b: 1 + b.alpha - b.beta,
        lambda b: 1 + b.alpha - b.gamma,
        lambda b: 1 + b.alpha / 2 - b.beta - b.gamma,
    ),
    den=(
        lambda b: 1 + b.alpha,
        lambda b: 1 + b.alpha / 2 - b.beta,
        lambda b: 1 + b.alpha / 2 - b.gamma,
        lambda b: 1 + b.alpha - b.beta - b.gamma,
    ),
)


def _rhs_dixon_nt(b):
    return DIXON_GAMMA.evaluate(b)


def _rhs_dixon_reflect(b):
    a, be, g = b.alpha, b.beta, b.gamma
    gammas = (
        _gamma(be - a / 2) * _gamma(g - a / 2) * _gamma(1 - a) * _gamma(be + g - a)
        * rgamma_real(be - a) * rgamma_real(g - a) * rgamma_real(1 - a / 2) * rgamma_real(be + g - a / 2)
    )
    sin_den = _sinpi(be - a) * _sinpi(g - a) * _sinpi(be + g - a / 2)
    if sin_den == 0:
        raise PoleInClosedForm("a sine factor in the denominator vanishes")
    sin_num = _sinpi(be - a / 2) * _sinpi(g - a / 2) * _sinpi(be + g - a)
    return _cospi(a / 2) * gammas * sin_num / sin_den


def _rhs_dixon_term_gamma(b):
    a, be, m = b.alpha, b.beta, b.m
    return (
        _cospi(a / 2) * _gamma(1 - a) * _gamma(1 + a - be) * _gamma(1 + a + m) * _gamma(1 + a / 2 - be + m)
        * rgamma_real(1 - a / 2) * rgamma_real(1 + a / 2 - be)
        * rgamma_real(1 + a / 2 + m) * rgamma_real(1 + a - be + m)
    )


def _zero(b):
    return Fraction(0)


# -- the catalog ------------------------------------------------------------

NONTERMINATING = "nonterminating"
TERMINATING = "terminating"
TRUNCATED = "truncated"


@dataclass(frozen=True)
class Theorem:
    key: str
    equation: str
    title: str
    kind: str
    params: tuple
    lhs: Callable[[Binding], tuple]
    rhs: Callable[[Binding], object]
    conditions: tuple = ()
    exact: bool = True
    order: Optional[Callable[[Binding], int]] = None
    order_label: Optional[str] = None

    @property
    def family(self) -> str:
        return self.key.split(".", 1)[0]

    @property
    def integer_params(self) -> tuple:
        return tuple(p for p in self.params if p in INTEGER_PARAMS)

    @property
    def rational_params(self) -> tuple:
        return tuple(p for p in self.params if p in RATIONAL_PARAMS)

    @property
    def is_zero(self) -> bool:
        return self.rhs is _zero

    def lhs_spec(self, b: Binding) -> HypergeometricSpec:
        num, den = self.lhs(b)
        trunc = self.order(b) if self.order is not None else None
        return HypergeometricSpec(num, den, 1, trunc)

    def as_dict(self) -> dict:
        return {
            "id": self.key,
            "equation": self.equation,
            "family": self.family,
            "kind": self.kind,
            "mode": "exact" if self.exact else "float",
            "params": list(self.params),
            "terms": self.order_label,
            "title": self.title,
        }


def _m(b):
    return b.m


def _2m(b):
    return 2 * b.m


def _2m1(b):
    return 2 * b.m + 1


def T(key, eq, title, kind, params, lhs, rhs, conditions=(), exact=True, order=None):
    labels = {_m: "m+1", _2m: "2m+1", _2m1: "2m+2"}
    return Theorem(key, eq, title, kind, params, lhs, rhs, tuple(conditions), exact, order,
                   labels.get(order))


_THEOREMS = [
    # Watson
    T("watson.nt", "2.1", "Watson, non-terminating", NONTERMINATING, ("alpha", "beta", "gamma"),
      lambda b: ([b.alpha, b.beta, b.gamma], [(1 + b.alpha + b.beta) / 2, 2 * b.gamma]),
      _rhs_watson_nt,
      [pos("gamma+(1-alpha-beta)/2", lambda b: b.gamma + (1 - b.alpha - b.beta) / 2),
       nn("(1+alpha+beta)/2", lambda b: (1 + b.alpha + b.beta) / 2),
       nn("gamma", lambda b: b.gamma), nn("2gamma", lambda b: 2 * b.gamma)],
      exact=False),
    T("watson.term-even", "2.2", "Watson, terminating (2m+1 terms)", TERMINATING, ("m", "beta", "gamma"),
      lambda b: ([-2 * b.m, b.beta, b.gamma], [(1 - 2 * b.m + b.beta) / 2, 2 * b.gamma]),
      lambda b: _div(poch(HALF, b.m) * poch(b.gamma + (1 - b.beta) / 2, b.m),
                     poch(b.gamma + HALF, b.m) * poch((1 - b.beta) / 2, b.m)),
      [nn("beta", lambda b: b.beta), nn("gamma", lambda b: b.gamma), nn("2gamma", lambda b: 2 * b.gamma),
       nn("(1+beta)/2-m", lambda b: (1 + b.beta) / 2 - b.m)]),
    T("watson.term-odd", "2.3", "Watson, terminating (2m+2 terms)", TERMINATING, ("m", "beta", "gamma"),
      lambda b: ([-2 * b.m - 1, b.beta, b.gamma], [(b.beta - 2 * b.m) / 2, 2 * b.gamma]),
      _zero,
      [nn("beta", lambda b: b.beta), nn("gamma", lambda b: b.gamma), nn("2gamma", lambda b: 2 * b.gamma),
       nn("(beta-2m)/2", lambda b: (b.beta - 2 * b.m) / 2)]),
    T("watson.trunc-m", "2.4", "Watson, truncated (m+1 terms)", TRUNCATED, ("m", "alpha", "beta"),
      lambda b: ([-b.m, b.alpha, b.beta], [-2 * b.m, (1 + b.alpha + b.beta) / 2]),
      lambda b: _div(poch((1 + b.alpha) / 2, b.m) * poch((1 + b.beta) / 2, b.m),
                     poch(HALF, b.m) * poch((1 + b.alpha + b.beta) / 2, b.m)),
      [nn("alpha", lambda b: b.alpha), nn("beta", lambda b: b.beta),
       nn("(1+alpha+beta)/2", lambda b: (1 + b.alpha + b.beta) / 2)],
      order=_m),
    T("watson.trunc-2m", "2.5", "Watson, truncated (2m+1 terms)", TRUNCATED, ("m", "k", "beta"),
      lambda b: ([-2 * b.m, b.beta, -b.m - b.k - HALF], [-2 * b.m - 2 * b.k - 1, (1 + b.beta) / 2 - b.m]),
      lambda b: _div(poch(HALF, b.m) * poch((2 + b.beta + 2 * b.k) / 2, b.m),
                     poch((1 - b.beta) / 2, b.m) * poch(1 + b.k, b.m)),
      [nn("beta", lambda b: b.beta), nn("(1+beta)/2-m", lambda b: (1 + b.beta) / 2 - b.m)],
      order=_2m),
    T("watson.trunc-2m1", "2.6", "Watson, truncated (2m+2 terms)", TRUNCATED, ("m", "k", "beta"),
      lambda b: ([-2 * b.m - 1, b.beta, -b.m - b.k - HALF], [-2 * b.m - 2 * b.k - 1, b.beta / 2 - b.m]),
      _zero,
      [nn("beta", lambda b: b.beta), nn("beta/2-m", lambda b: b.beta / 2 - b.m)],
      order=_2m1),
    # Saalschutz
    T("saalschutz.nt", "2.7", "Saalschutz, non-terminating", NONTERMINATING, ("alpha", "beta", "gamma", "delta"),
      lambda b: ([b.alpha, b.beta, b.gamma + b.delta - b.alpha - b.beta - 1], [b.gamma, b.delta]),
      _rhs_saalschutz_nt,
      [pos("delta-alpha-beta", lambda b: b.delta - b.alpha - b.beta),
       pos("gamma-alpha-beta", lambda b: b.gamma - b.alpha - b.beta)],
      exact=False),
    T("saalschutz.term", "2.8", "Saalschutz, terminating", TERMINATING, ("m", "alpha", "beta", "gamma"),
      lambda b: ([b.alpha, b.beta, -b.m], [b.gamma, 1 + b.alpha + b.beta - b.gamma - b.m]),
      lambda b: _div(poch(b.gamma - b.alpha, b.m) * poch(b.gamma - b.beta, b.m),
                     poch(b.gamma, b.m) * poch(b.gamma - b.alpha - b.beta, b.m)),
      [nn("alpha", lambda b: b.alpha), nn("beta", lambda b: b.beta), nn("gamma", lambda b: b.gamma),
       nn("1+alpha+beta-gamma-m", lambda b: 1 + b.alpha + b.beta - b.gamma - b.m)]),
    T("saalschutz.trunc", "2.8c", "Saalschutz, truncated", TRUNCATED, ("m", "k", "alpha", "beta"),
      lambda b: ([-b.m, b.alpha, b.beta], [-b.m - b.k, 1 + b.alpha + b.beta + b.k]),
      lambda b: _div(poch(1 + b.alpha + b.k, b.m) * poch(1 + b.beta + b.k, b.m),
                     poch(1 + b.k, b.m) * poch(1 + b.alpha + b.beta + b.k, b.m)),
      [nn("alpha", lambda b: b.alpha), nn("beta", lambda b: b.beta),
       nn("1+alpha+beta+k", lambda b: 1 + b.alpha + b.beta + b.k)],
      order=_m),
    T("saalschutz.term-b", "2.8a", "Saalschutz, terminating (second form)", TERMINATING,
      ("m", "alpha", "beta", "gamma"),
      lambda b: ([-b.m, b.alpha + b.m, 1 + b.alpha - b.beta - b.gamma], [1 + b.alpha - b.beta, 1 + b.alpha - b.gamma]),
      lambda b: _div(poch(b.beta, b.m) * poch(b.gamma, b.m),
                     poch(1 + b.alpha - b.beta, b.m) * poch(1 + b.alpha - b.gamma, b.m)),
      [nn("alpha+m", lambda b: b.alpha + b.m), nn("1+alpha-beta-gamma", lambda b: 1 + b.alpha - b.beta - b.gamma),
       nn("1+alpha-beta", lambda b: 1 + b.alpha - b.beta), nn("1+alpha-gamma", lambda b: 1 + b.alpha - b.gamma)]),
    T("saalschutz.trunc-b", "2.8b", "Saalschutz, truncated (second form)", TRUNCATED, ("m", "k", "beta", "gamma"),
      lambda b: ([-b.m, b.beta - b.k - 1, -b.m - b.k - b.gamma], [-b.m - b.k, b.beta - b.gamma - b.m - b.k]),
      lambda b: _div(poch(b.beta, b.m) * poch(b.gamma, b.m),
                     poch(1 + b.k, b.m) * poch(1 + b.k + b.gamma - b.beta, b.m)),
      [nn("beta-k-1", lambda b: b.beta - b.k - 1), nn("-m-k-gamma", lambda b: -b.m - b.k - b.gamma),
       nn("beta-gamma-m-k", lambda b: b.beta - b.gamma - b.m - b.k)],
      order=_m),
    # Whipple
    T("whipple.nt", "2.9", "Whipple, non-terminating", NONTERMINATING, ("alpha", "beta", "gamma"),
      lambda b: ([b.alpha, 1 - b.alpha, b.beta], [b.gamma, 2 * b.beta - b.gamma + 1]),
      _rhs_whipple_nt,
      [pos("beta", lambda b: b.beta), nn("gamma", lambda b: b.gamma),
       nn("2beta-gamma+1", lambda b: 2 * b.beta - b.gamma + 1)],
      exact=False),
    T("whipple.term-even", "2.10", "Whipple, terminating (2m+1 terms)", TERMINATING, ("m", "beta", "gamma"),
      lambda b: ([-2 * b.m, 1 + 2 * b.m, b.beta], [b.gamma, 1 + 2 * b.beta - b.gamma]),
      lambda b: _div(poch((2 - b.gamma) / 2, b.m) * poch((1 - 2 * b.beta + b.gamma) / 2, b.m),
                     poch((1 + b.gamma) / 2, b.m) * poch((2 + 2 * b.beta - b.gamma) / 2, b.m)),
      [nn("beta", lambda b: b.beta), nn("gamma", lambda b: b.gamma),
       nn("1+2beta-gamma", lambda b: 1 + 2 * b.beta - b.gamma)]),
    T("whipple.term-odd", "2.11", "Whipple, terminating (2m+2 terms)", TERMINATING, ("m", "beta", "gamma"),
      lambda b: ([-2 * b.m - 1, 2 + 2 * b.m, b.beta], [b.gamma, 1 + 2 * b.beta - b.gamma]),
      lambda b: _div((b.gamma - 1) * (2 * b.beta - b.gamma) * poch((3 - b.gamma) / 2, b.m)
                     * poch((2 - 2 * b.beta + b.gamma) / 2, b.m),
                     b.gamma * (1 + 2 * b.beta - b.gamma) * poch((2 + b.gamma) / 2, b.m)
                     * poch((3 + 2 * b.beta - b.gamma) / 2, b.m)),
      [nn("beta", lambda b: b.beta), nn("gamma", lambda b: b.gamma),
       nn("1+2beta-gamma", lambda b: 1 + 2 * b.beta - b.gamma)]),
    T("whipple.term-b", "2.13", "Whipple, terminating (m+1 terms)", TERMINATING, ("m", "alpha", "gamma"),
      lambda b: ([-b.m, b.alpha, 1 - b.alpha], [b.gamma, 1 - b.gamma - 2 * b.m]),
      lambda b: _div(poch((b.gamma + b.alpha) / 2, b.m) * poch((b.gamma - b.alpha + 1) / 2, b.m),
                     poch(b.gamma / 2, b.m) * poch((b.gamma + 1) / 2, b.m)),
      [nn("alpha", lambda b: b.alpha), nn("1-alpha", lambda b: 1 - b.alpha), nn("gamma", lambda b: b.gamma),
       nn("1-gamma-2m", lambda b: 1 - b.gamma - 2 * b.m),
       nn("(alpha+gamma+2m)/2", lambda b: (b.alpha + b.gamma + 2 * b.m) / 2),
       nn("(1-alpha+gamma+2m)/2", lambda b: (1 - b.alpha + b.gamma + 2 * b.m) / 2)]),
    T("whipple.trunc-m", "2.14a", "Whipple, truncated (m+1 terms)", TRUNCATED, ("m", "k", "alpha"),
      lambda b: ([-b.m, b.alpha, 1 - b.alpha], [-2 * b.m - b.k, 1 + b.k]),
      lambda b: _div(poch((2 - b.alpha + b.k) / 2, b.m) * poch((1 + b.alpha + b.k) / 2, b.m),
                     poch(Fraction(2 + b.k, 2), b.m) * poch(Fraction(1 + b.k, 2), b.m)),
      [nn("alpha", lambda b: b.alpha), nn("1-alpha", lambda b: 1 - b.alpha)],
      order=_m),
    T("whipple.trunc-2m-a", "2.15", "Whipple, truncated (2m+1 terms)", TRUNCATED, ("m", "k", "beta"),
      lambda b: ([-2 * b.m, 1 + 2 * b.m, b.beta], [-2 * b.m - 2 * b.k, 2 * b.beta + 2 * b.m + 2 * b.k + 1]),
      lambda b: _div(poch(1 + 2 * b.beta + 2 * b.k, 2 * b.m) * poch(1 + b.k, 2 * b.m),
                     poch(1 + 2 * b.k, 2 * b.m) * poch(1 + b.beta + b.k, 2 * b.m)),
      [nn("beta", lambda b: b.beta), nn("2beta+2m+2k+1", lambda b: 2 * b.beta + 2 * b.m + 2 * b.k + 1)],
      order=_2m),
    T("whipple.trunc-2m-b", "2.15a", "Whipple, truncated (2m+1 terms, second form)", TRUNCATED, ("m", "k", "beta"),
      lambda b: ([-2 * b.m, 1 + 2 * b.m, b.beta], [-2 * b.m - 2 * b.k - 1, 2 * b.beta + 2 + 2 * b.m + 2 * b.k]),
      lambda b: _div(poch(2 + 2 * b.beta + 2 * b.k, 2 * b.m) * poch(Fraction(3 + 2 * b.k, 2), 2 * b.m),
                     poch(2 + 2 * b.k, 2 * b.m) * poch((3 + 2 * b.beta + 2 * b.k) / 2, 2 * b.m)),
      [nn("beta", lambda b: b.beta), nn("2beta+2m+2k+2", lambda b: 2 * b.beta + 2 * b.m + 2 * b.k + 2)],
      order=_2m),
    T("whipple.trunc-2m1-a", "2.16", "Whipple, truncated (2m+2 terms)", TRUNCATED, ("m", "k", "beta"),
      lambda b: ([-2 * b.m - 1, 2 + 2 * b.m, b.beta], [-2 * b.m - 2 * b.k - 1, 2 * b.beta + 2 * b.m + 2 * b.k + 2]),
      lambda b: _div((b.k + 1) * (2 * b.beta + 2 * b.m + 2 * b.k + 1) * poch(2 * b.beta + 2 * b.k + 1, 2 * b.m)
                     * poch(2 + b.k, 2 * b.m),
                     (2 * b.m + 2 * b.k + 1) * (b.beta + b.k + 1) * poch(2 * b.k + 1, 2 * b.m)
                     * poch(2 + b.beta + b.k, 2 * b.m)),
      [nn("beta", lambda b: b.beta), nn("2beta+2m+2k+2", lambda b: 2 * b.beta + 2 * b.m + 2 * b.k + 2)],
      order=_2m1),
    T("whipple.trunc-2m1-b", "2.16a", "Whipple, truncated (2m+2 terms, second form)", TRUNCATED, ("m", "k", "beta"),
      lambda b: ([-2 * b.m - 1, 2 + 2 * b.m, b.beta], [-2 * b.m - 2 * b.k - 2, 2 * b.beta + 2 * b.m + 2 * b.k + 3]),
      lambda b: _div((2 * b.k + 3) * (b.beta + b.m + b.k + 1) * poch(2 * b.beta + 2 * b.k + 2, 2 * b.m)
                     * poch(Fraction(5 + 2 * b.k, 2), 2 * b.m),
                     (b.m + b.k + 1) * (2 * b.beta + 2 * b.k + 3) * poch(2 * b.k + 2, 2 * b.m)
                     * poch((5 + 2 * b.beta + 2 * b.k) / 2, 2 * b.m)),
      [nn("beta", lambda b: b.beta), nn("2beta+2m+2k+3", lambda b: 2 * b.beta + 2 * b.m + 2 * b.k + 3)],
      order=_2m1),
    # Dixon
    T("dixon.nt", "2.18", "Dixon, non-terminating", NONTERMINATING, ("alpha", "beta", "gamma"),
      lambda b: ([b.alpha, b.beta, b.gamma], [1 + b.alpha - b.beta, 1 + b.alpha - b.gamma]),
      _rhs_dixon_nt,
      [pos("alpha-2beta-2gamma+2", lambda b: b.alpha - 2 * b.beta - 2 * b.gamma + 2),
       nn("1+alpha-beta", lambda b: 1 + b.alpha - b.beta), nn("1+alpha-gamma", lambda b: 1 + b.alpha - b.gamma),
       nn("1+alpha/2", lambda b: 1 + b.alpha / 2),
       nn("1+alpha/2-beta-gamma", lambda b: 1 + b.alpha / 2 - b.beta - b.gamma)],
      exact=False),
    T("dixon.nt-reflect", "2.19", "Dixon, non-terminating (reflected trigonometric form)", NONTERMINATING,
      ("alpha", "beta", "gamma"),
      lambda b: ([b.alpha, b.beta, b.gamma], [1 + b.alpha - b.beta, 1 + b.alpha - b.gamma]),
      _rhs_dixon_reflect,
      [pos("alpha-2beta-2gamma+2", lambda b: b.alpha - 2 * b.beta - 2 * b.gamma + 2),
       nn("1+alpha-beta", lambda b: 1 + b.alpha - b.beta), nn("1+alpha-gamma", lambda b: 1 + b.alpha - b.gamma),
       nn("1+alpha/2", lambda b: 1 + b.alpha / 2),
       nn("1+alpha/2-beta-gamma", lambda b: 1 + b.alpha / 2 - b.beta - b.gamma)],
      exact=False),
    T("dixon.term-even", "2.20", "Dixon, terminating (2m+1 terms)", TERMINATING, ("m", "beta", "gamma"),
      lambda b: ([-2 * b.m, b.beta, b.gamma], [1 - 2 * b.m - b.beta, 1 - 2 * b.m - b.gamma]),
      lambda b: _div(poch(b.beta, b.m) * poch(b.gamma, b.m) * 4**b.m * poch(HALF, b.m)
                     * poch(b.beta + b.gamma, 2 * b.m),
                     poch(b.beta, 2 * b.m) * poch(b.gamma, 2 * b.m) * poch(b.beta + b.gamma, b.m)),
      [ni("beta", lambda b: b.beta), ni("gamma", lambda b: b.gamma)]),
    T("dixon.term-odd", "2.21", "Dixon, terminating (2m+2 terms)", TERMINATING, ("m", "beta", "gamma"),
      lambda b: ([-2 * b.m - 1, b.beta, b.gamma], [-2 * b.m - b.beta, -2 * b.m - b.gamma]),
      _zero,
      [ni("beta", lambda b: b.beta), ni("gamma", lambda b: b.gamma)]),
    T("dixon.trunc-a", "2.22", "Dixon, truncated (2m+1 terms)", TRUNCATED, ("m", "k", "gamma"),
      lambda b: ([-2 * b.m, 1 + b.k, b.gamma], [-2 * b.m - b.k, 1 - 2 * b.m - b.gamma]),
      lambda b: _div(poch(1 + b.k, b.m) * poch(b.gamma, b.m) * 4**b.m * poch(HALF, b.m)
                     * poch(1 + b.k + b.gamma, 2 * b.m),
                     poch(1 + b.k, 2 * b.m) * poch(b.gamma, 2 * b.m) * poch(1 + b.k + b.gamma, b.m)),
      [nn("gamma", lambda b: b.gamma), nn("1-2m-gamma", lambda b: 1 - 2 * b.m - b.gamma)],
      order=_2m),
    T("dixon.trunc-b", "2.23", "Dixon, truncated (2m+1 terms, gamma=1+k)", TRUNCATED, ("m", "k"),
      lambda b: ([-2 * b.m, 1 + b.k, 1 + b.k], [-2 * b.m - b.k, -2 * b.m - b.k]),
      lambda b: _div(poch(1 + b.k, b.m) ** 2 * 4**b.m * poch(HALF, b.m) * poch(2 + 2 * b.k, 2 * b.m),
                     poch(1 + b.k, 2 * b.m) ** 2 * poch(2 + 2 * b.k, b.m)),
      [],
      order=_2m),
    T("dixon.trunc-c", "2.24", "Dixon, truncated (2m+2 terms)", TRUNCATED, ("m", "k", "gamma"),
      lambda b: ([-2 * b.m - 1, 1 + b.k, b.gamma], [-2 * b.m - 1 - b.k, -2 * b.m - b.gamma]),
      _zero,
      [nn("gamma", lambda b: b.gamma), nn("-2m-gamma", lambda b: -2 * b.m - b.gamma)],
      order=_2m1),
    T("dixon.trunc-d", "2.25", "Dixon, truncated (2m+2 terms, gamma=1+k)", TRUNCATED, ("m", "k"),
      lambda b: ([-2 * b.m - 1, 1 + b.k, 1 + b.k], [-2 * b.m - 1 - b.k, -2 * b.m - 1 - b.k]),
      _zero,
      [],
      order=_2m1),
    T("dixon.term-alpha-even", "2.20a", "Dixon, terminating in beta (2m+1 terms)", TERMINATING,
      ("m", "alpha", "gamma"),
      lambda b: ([-2 * b.m, b.alpha, b.gamma], [1 + b.alpha + 2 * b.m, 1 + b.alpha - b.gamma]),
      lambda b: _div(poch(1 + b.alpha, 2 * b.m) * poch(1 + b.alpha / 2 - b.gamma, 2 * b.m),
                     poch(1 + b.alpha / 2, 2 * b.m) * poch(1 + b.alpha - b.gamma, 2 * b.m)),
      [ni("alpha", lambda b: b.alpha), ni("gamma", lambda b: b.gamma)]),
    T("dixon.term-alpha-odd", "2.20b", "Dixon, terminating in beta (2m+2 terms)", TERMINATING,
      ("m", "alpha", "gamma"),
      lambda b: ([-2 * b.m - 1, b.alpha, b.gamma], [2 + b.alpha + 2 * b.m, 1 + b.alpha - b.gamma]),
      lambda b: _div((1 + b.alpha) * (2 + b.alpha - 2 * b.gamma) * poch(2 + b.alpha, 2 * b.m)
                     * poch(2 + b.alpha / 2 - b.gamma, 2 * b.m),
                     (2 + b.alpha) * (1 + b.alpha - b.gamma) * poch(2 + b.alpha / 2, 2 * b.m)
                     * poch(2 + b.alpha - b.gamma, 2 * b.m)),
      [ni("alpha", lambda b: b.alpha), ni("gamma", lambda b: b.gamma)]),
    T("dixon.trunc-e", "2.20c", "Dixon, truncated in beta (2m+1 terms)", TRUNCATED, ("m", "k", "alpha"),
      lambda b: ([-2 * b.m, b.alpha, 1 + b.alpha + 2 * b.m + b.k], [-2 * b.m - b.k, 1 + b.alpha + 2 * b.m]),
      lambda b: _div(poch(1 + b.alpha, 2 * b.m) * poch(1 + b.alpha / 2 + b.k, 2 * b.m),
                     poch(1 + b.alpha / 2, 2 * b.m) * poch(1 + b.k, 2 * b.m)),
      [nn("alpha", lambda b: b.alpha), nn("1+alpha+2m+k", lambda b: 1 + b.alpha + 2 * b.m + b.k),
       nn("1+alpha+2m", lambda b: 1 + b.alpha + 2 * b.m)],
      order=_2m),
    T("dixon.trunc-f", "2.20d", "Dixon, truncated in beta (2m+2 terms)", TRUNCATED, ("m", "k", "alpha"),
      lambda b: ([-2 * b.m - 1, b.alpha, 2 + b.alpha + 2 * b.m + b.k], [-2 * b.m - b.k - 1, 2 + b.alpha + 2 * b.m]),
      lambda b: _div((1 + b.alpha) * (2 + 2 * b.k + b.alpha + 4 * b.m) * poch(2 + b.alpha, 2 * b.m)
                     * poch(1 + b.alpha / 2 + b.k, 2 * b.m),
                     (2 + b.alpha) * (1 + 2 * b.m + b.k) * poch(2 + b.alpha / 2, 2 * b.m)
                     * poch(1 + b.k, 2 * b.m)),
      [nn("alpha", lambda b: b.alpha), nn("2+alpha+2m+k", lambda b: 2 + b.alpha + 2 * b.m + b.k),
       nn("2+alpha+2m", lambda b: 2 + b.alpha + 2 * b.m)],
      order=_2m1),
    T("dixon.term-gamma", "2.26", "Dixon, terminating (Gamma form)", TERMINATING, ("m", "alpha", "beta"),
      lambda b: ([b.alpha, b.beta, -b.m], [1 + b.alpha - b.beta, 1 + b.alpha + b.m]),
      _rhs_dixon_term_gamma,
      [nn("alpha", lambda b: b.alpha), nn("beta", lambda b: b.beta),
       nn("1+alpha-beta", lambda b: 1 + b.alpha - b.beta), nn("1+alpha+m", lambda b: 1 + b.alpha + b.m)],
      exact=False),
    T("dixon.term-m", "2.27", "Dixon, terminating (m+1 terms)", TERMINATING, ("m", "alpha", "gamma"),
      lambda b: ([-b.m, b.alpha, b.gamma], [1 + b.alpha + b.m, 1 + b.alpha - b.gamma]),
      lambda b: _div(poch(1 + b.alpha, b.m) * poch(1 + b.alpha / 2 - b.gamma, b.m),
                     poch(1 + b.alpha / 2, b.m) * poch(1 + b.alpha - b.gamma, b.m)),
      [nn("alpha", lambda b: b.alpha), nn("gamma", lambda b: b.gamma),
       nn("1+alpha+m", lambda b: 1 + b.alpha + b.m), nn("1+alpha-gamma", lambda b: 1 + b.alpha - b.gamma)]),
]

CATALOG = {t.key: t for t in _THEOREMS}
_BY_EQUATION = {t.equation: t for t in _THEOREMS}


def list_theorems() -> list:
    """Theorem ids in catalog order."""
    return [t.key for t in _THEOREMS]


def get_theorem(key: Union[str, Theorem]) -> Theorem:
    """Look up by id (``watson.trunc-m``) or equation tag (``2.4``)."""
    if isinstance(key, Theorem):
        return key
    t = CATALOG.get(key) or _BY_EQUATION.get(key.strip("()"))
    if t is None:
        raise UnknownTheorem(f"unknown theorem id: {key!r}")
    return t


# -- instances --------------------------------------------------------------

EXACT = "exact"
FLOAT = "float"


@dataclass(frozen=True)
class TheoremInstance:
    theorem: Theorem
    binding: Binding
    mode: str
    lhs: HypergeometricSpec

    @property
    def id(self) -> str:
        return self.theorem.key

    def as_dict(self) -> dict:
        return {
            "theorem": self.theorem.key,
            "equation": self.theorem.equation,
            "mode": self.mode,
            "params": self.binding.as_dict(),
        }


def _coerce_binding(theorem: Theorem, params) -> Binding:
    if isinstance(params, Binding):
        params = {k: v for k, v in dataclasses.asdict(params).items() if v is not None}
    values = {}
    for name, v in params.items():
        if v is None:
            continue
        if name not in theorem.params:
            raise UnknownParameter(f"{theorem.key} has no parameter {name!r} (expects {', '.join(theorem.params)})")
        if name in INTEGER_PARAMS:
            fv = Fraction(v) if not isinstance(v, str) else Fraction(v)
            if fv.denominator != 1:
                raise SideConditionViolated(f"{name} in N", f"{name} = {v}")
            values[name] = int(fv)
        else:
            values[name] = Fraction(v)
    missing = [p for p in theorem.params if p not in values]
    if missing:
        raise UnknownParameter(f"{theorem.key} is missing parameter(s): {', '.join(missing)}")
    return Binding(**values)


def check_conditions(theorem: Theorem, b: Binding, permissive: bool = False):
    """Raise SideConditionViolated naming the first failing condition."""
    lowest = 0 if permissive else 1
    for name in theorem.integer_params:
        v = getattr(b, name)
        if v < lowest:
            raise SideConditionViolated(f"{name} in {'N0' if permissive else 'N'}", f"{name} = {v}")
    for c in theorem.conditions:
        if not c.holds(b):
            raise SideConditionViolated(c.label, f"value {format_rational(c.value(b))}")


def instantiate(theorem, params, mode: Optional[str] = None, permissive: bool = False) -> TheoremInstance:
    """Bind parameters, validate the side conditions and build the LHS series.

    ``permissive`` admits m = 0 and k = 0, which the printed theorems exclude.
    """
    t = get_theorem(theorem)
    b = _coerce_binding(t, params)
    check_conditions(t, b, permissive)
    if mode is None:
        mode = EXACT if t.exact else FLOAT
    if mode not in (EXACT, FLOAT):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == EXACT and not t.exact:
        raise ValueError(f"{t.key} has a Gamma-form right-hand side; only float mode is available")
    return TheoremInstance(t, b, mode, t.lhs_spec(b))


def rhs_closed_form(instance: TheoremInstance):
    """Printed right-hand side: Fraction for exact entries, mpf otherwise."""
    try:
        return instance.theorem.rhs(instance.binding)
    except ZeroDivisionError as exc:
        raise PoleInClosedForm(str(exc)) from None


def lhs_term_count(spec: HypergeometricSpec) -> int:
    if spec.truncation is not None:
        return spec.truncation + 1
    n = terminating_order(spec)
    return n + 1 if n is not None else 0


# -- verification -----------------------------------------------------------

EQUAL = "equal"
MISMATCH = "mismatch"
INAPPLICABLE = "inapplicable"


@dataclass
class VerificationReport:
    instance: TheoremInstance
    verdict: str
    lhs: object = None
    rhs: object = None
    abs_diff: object = None
    rel_diff: object = None
    tolerance: Optional[float] = None
    terms_summed: int = 0
    diagnostics: str = ""

    @property
    def equal(self) -> bool:
        return self.verdict == EQUAL

    def as_dict(self) -> dict:
        out = self.instance.as_dict()
        out.update({
            "lhs": format_value(self.lhs),
            "rhs": format_value(self.rhs),
            "verdict": self.verdict,
            "terms_summed": self.terms_summed,
        })
        if self.instance.mode == FLOAT:
            out["abs_diff"] = format_value(self.abs_diff)
            out["rel_diff"] = format_value(self.rel_diff)
            out["tolerance"] = self.tolerance
        if self.diagnostics:
            out["diagnostics"] = self.diagnostics
        return out


def format_value(x, digits: int = 25):
    """Rationals as "p/q", mpf values as fixed-digit decimal strings."""
    if x is None:
        return None
    if isinstance(x, (Fraction, int)):
        return format_rational(Fraction(x))
    return hp.nstr(x, digits, min_fixed=-5, max_fixed=8)


def verify(instance: TheoremInstance, float_tol: float = 1e-10) -> VerificationReport:
    """Compare both sides: exactly in exact mode, to ``float_tol`` relative otherwise."""
    spec = instance.lhs
    if instance.mode == EXACT:
        try:
            lhs = eval_exact(spec)
            rhs = rhs_closed_form(instance)
        except (ClausenError, ZeroDivisionError) as exc:
            return VerificationReport(instance, INAPPLICABLE, diagnostics=f"{type(exc).__name__}: {exc}")
        verdict = EQUAL if lhs == rhs else MISMATCH
        return VerificationReport(instance, verdict, lhs, rhs, terms_summed=lhs_term_count(spec))
    try:
        sv = eval_nonterminating_float(spec, rel_tol=float_tol * 1e-3, max_terms=SERIES_MAX_TERMS)
        rhs = rhs_closed_form(instance)
    except (ClausenError, ZeroDivisionError) as exc:
        return VerificationReport(instance, INAPPLICABLE, tolerance=float_tol,
                                  diagnostics=f"{type(exc).__name__}: {exc}")
    lhs = sv.value
    rhs_f = to_mpf(rhs)
    abs_diff = abs(lhs - rhs_f)
    rel_diff = abs_diff / abs(rhs_f) if rhs_f != 0 else abs_diff
    verdict = EQUAL if rel_diff <= float_tol else MISMATCH
    return VerificationReport(instance, verdict, lhs, rhs_f, abs_diff, rel_diff, float_tol, sv.terms,
                              diagnostics="" if sv.rigorous else f"series error estimate {hp.nstr(sv.error, 3)} ({sv.method})")


# -- derivation edges -------------------------------------------------------


@dataclass(frozen=True)
class Edge:
    child: str
    parent: str
    substitution: str
    to_parent: Callable[[Binding], Binding]
    perturb: Optional[str] = None


def _E(child, parent, text, fn, perturb=None):
    return Edge(child, parent, text, fn, perturb)


_EDGES = [
    _E("watson.trunc-2m", "watson.term-even", "gamma = -m-k-1/2",
       lambda b: Binding(m=b.m, beta=b.beta, gamma=-b.m - b.k - HALF)),
    _E("watson.trunc-2m1", "watson.term-odd", "gamma = -m-k-1/2",
       lambda b: Binding(m=b.m, beta=b.beta, gamma=-b.m - b.k - HALF)),
    _E("saalschutz.trunc", "saalschutz.term", "gamma = -m-k",
       lambda b: Binding(m=b.m, alpha=b.alpha, beta=b.beta, gamma=Fraction(-b.m - b.k))),
    _E("saalschutz.trunc-b", "saalschutz.term-b", "alpha = beta-m-k-1",
       lambda b: Binding(m=b.m, alpha=b.beta - b.m - b.k - 1, beta=b.beta, gamma=b.gamma)),
    _E("whipple.trunc-2m-a", "whipple.term-even", "gamma = -2m-2k",
       lambda b: Binding(m=b.m, beta=b.beta, gamma=Fraction(-2 * b.m - 2 * b.k))),
    _E("whipple.trunc-2m-b", "whipple.term-even", "gamma = -2m-2k-1",
       lambda b: Binding(m=b.m, beta=b.beta, gamma=Fraction(-2 * b.m - 2 * b.k - 1))),
    _E("whipple.trunc-2m1-a", "whipple.term-odd", "gamma = -2m-2k-1",
       lambda b: Binding(m=b.m, beta=b.beta, gamma=Fraction(-2 * b.m - 2 * b.k - 1))),
    _E("whipple.trunc-2m1-b", "whipple.term-odd", "gamma = -2m-2k-2",
       lambda b: Binding(m=b.m, beta=b.beta, gamma=Fraction(-2 * b.m - 2 * b.k - 2))),
    _E("whipple.trunc-m", "whipple.term-b", "gamma = -2m-k",
       lambda b: Binding(m=b.m, alpha=b.alpha, gamma=Fraction(-2 * b.m - b.k))),
    _E("dixon.trunc-a", "dixon.term-even", "beta = 1+k",
       lambda b: Binding(m=b.m, beta=Fraction(1 + b.k), gamma=b.gamma)),
    _E("dixon.trunc-b", "dixon.trunc-a", "gamma = 1+k",
       lambda b: Binding(m=b.m, k=b.k, gamma=Fraction(1 + b.k))),
    _E("dixon.trunc-c", "dixon.term-odd", "beta = 1+k",
       lambda b: Binding(m=b.m, beta=Fraction(1 + b.k), gamma=b.gamma)),
    _E("dixon.trunc-d", "dixon.trunc-c", "gamma = 1+k",
       lambda b: Binding(m=b.m, k=b.k, gamma=Fraction(1 + b.k))),
    _E("dixon.trunc-e", "dixon.term-alpha-even", "gamma = 1+alpha+2m+k",
       lambda b: Binding(m=b.m, alpha=b.alpha, gamma=1 + b.alpha + 2 * b.m + b.k)),
    _E("dixon.trunc-f", "dixon.term-alpha-odd", "gamma = 2+alpha+2m+k",
       lambda b: Binding(m=b.m, alpha=b.alpha, gamma=2 + b.alpha + 2 * b.m + b.k)),
    _E("dixon.term-even", "dixon.nt", "alpha = -2m",
       lambda b: Binding(alpha=Fraction(-2 * b.m), beta=b.beta, gamma=b.gamma), "alpha"),
    _E("dixon.term-odd", "dixon.nt", "alpha = -2m-1",
       lambda b: Binding(alpha=Fraction(-2 * b.m - 1), beta=b.beta, gamma=b.gamma), "alpha"),
    _E("dixon.term-alpha-even", "dixon.nt", "beta = -2m",
       lambda b: Binding(alpha=b.alpha, beta=Fraction(-2 * b.m), gamma=b.gamma), "beta"),
    _E("dixon.term-alpha-odd", "dixon.nt", "beta = -2m-1",
       lambda b: Binding(alpha=b.alpha, beta=Fraction(-2 * b.m - 1), gamma=b.gamma), "beta"),
    _E("dixon.term-gamma", "dixon.nt", "gamma = -m",
       lambda b: Binding(alpha=b.alpha, beta=b.beta, gamma=Fraction(-b.m)), "gamma"),
    _E("dixon.term-m", "dixon.nt", "beta = -m",
       lambda b: Binding(alpha=b.alpha, beta=Fraction(-b.m), gamma=b.gamma), "beta"),
]

EDGES = {(e.child, e.parent): e for e in _EDGES}


def list_edges() -> list:
    return list(_EDGES)


def get_edge(child, parent) -> Edge:
    key = (get_theorem(child).key, get_theorem(parent).key)
    if key not in EDGES:
        raise UnknownEdge(f"no documented derivation {key[1]} -> {key[0]}")
    return EDGES[key]


def parent_rhs(edge: Edge, child_binding: Binding):
    """Parent right-hand side under the substitution (exact where possible).

    The parent's own side conditions are not applied: substitutions of this
    kind deliberately land on parameter values the parent excludes.
    """
    parent = get_theorem(edge.parent)
    pb = edge.to_parent(child_binding)
    # the other parameters are shifted too (more slowly) so that coincident
    # poles at special values resolve to the generic continuation
    if edge.perturb is None:
        try:
            return parent.rhs(pb)
        except ZeroDivisionError as exc:
            raise PoleInClosedForm(str(exc)) from None
    others = tuple(p for p in parent.rational_params if p != edge.perturb)
    value = DIXON_GAMMA.limit(pb, (edge.perturb,) + others)
    if value is None:
        raise PoleInClosedForm("substituted Gamma product does not reduce to a rational")
    return value


def derivation_check(child, parent, params, float_tol: float = 1e-10, permissive: bool = False) -> bool:
    """True iff the child's RHS equals the parent's RHS after substitution.

    Both sides are compared exactly when both are rational; a Gamma-form
    child is compared with the parent's exact value to ``float_tol``.
    """
    edge = get_edge(child, parent)
    c = get_theorem(edge.child)
    b = _coerce_binding(c, params)
    check_conditions(c, b, permissive)
    child_value = rhs_closed_form(TheoremInstance(c, b, EXACT if c.exact else FLOAT, c.lhs_spec(b)))
    parent_value = parent_rhs(edge, b)
    if isinstance(child_value, Fraction) and isinstance(parent_value, Fraction):
        return child_value == parent_value
    cv, pv = to_mpf(child_value), to_mpf(parent_value)
    scale = abs(pv) if pv != 0 else hp.one
    return bool(abs(cv - pv) <= float_tol * scale)


# -- random bindings --------------------------------------------------------


class BindingRejected(ClausenError):
    pass


def random_rational(rng, bound: int) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))


def _float_margin_ok(theorem: Theorem, b: Binding, spec: HypergeometricSpec, margin: Fraction) -> bool:
    for c in theorem.conditions:
        if c.kind == POSITIVE and c.value(b) < margin:
            return False
    info = convergence_info(spec)
    if info.regime.value == "polynomial":
        return True
    return info.omega >= margin


def random_binding(theorem, rng, m_max: int = 8, k_max: int = 8, bound: int = 20,
                   float_margin: Fraction = Fraction(1, 4), max_attempts: int = 10000) -> TheoremInstance:
    """Draw a valid instance: m, k uniform in 1..max, rationals n/d with |n|, d <= bound.

    Draws that violate a side condition, put a pole inside the summation
    range or make the closed form undefined are rejected.  Float-mode draws
    also need every positivity condition and the series' omega to be at
    least ``float_margin``.
    """
    t = get_theorem(theorem)
    for _ in range(max_attempts):
        params = {}
        for name in t.params:
            if name == "m":
                params[name] = rng.randint(1, m_max)
            elif name == "k":
                params[name] = rng.randint(1, k_max)
            else:
                params[name] = random_rational(rng, bound)
        try:
            inst = instantiate(t, params)
        except SideConditionViolated:
            continue
        spec = inst.lhs
        if spec.truncation is not None or terminating_order(spec) is not None:
            if first_pole(spec, lhs_term_count(spec) - 1) is not None:
                continue
        elif any(is_nonpositive_integer(x) for x in spec.denominator):
            continue
        if inst.mode == FLOAT and not _float_margin_ok(t, inst.binding, spec, float_margin):
            continue
        try:
            rhs_closed_form(inst)
        except (ClausenError, ZeroDivisionError):
            continue
        return inst
    raise BindingRejected(f"no valid binding for {t.key} after {max_attempts} draws")
