"""Mellin transforms of exp(-mu t) times a truncated 2F2 polynomial.

    int_0^oo t^(s-1) e^(-mu t) 2F2[-m, a; -m-l, b; lam t]_m dt
        = Gamma(s)/mu^s * 3F2[-m, a, s; -m-l, b; lam/mu]_m

Values are carried as a rational coefficient times Gamma(s)/mu^s, so the
closed forms can be compared exactly.  A generalized Gauss-Laguerre rule
gives an independent numeric check.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np
from scipy.special import roots_genlaguerre

from ._mp import hp, to_mpf
from .catalog import Binding, get_theorem, random_rational
from .errors import (
    ClausenError,
    DomainError,
    PoleInClosedForm,
    PoleInRange,
    QuadratureFailure,
    SideConditionViolated,
    UnknownParameter,
)
from .gamma import gamma_real
from .rational import format_rational, is_nonpositive_integer, rising
from .series import HypergeometricSpec, eval_truncated, first_pole

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class MellinValue:
    """coefficient * Gamma(s) / mu^s"""

    coefficient: Fraction
    s: Fraction
    mu: Fraction

    @property
    def value(self):
        if self.coefficient == 0:
            return hp.zero
        return to_mpf(self.coefficient) * gamma_real(self.s) / hp.power(to_mpf(self.mu), to_mpf(self.s))

    def as_dict(self) -> dict:
        return {
            "coefficient": format_rational(self.coefficient),
            "gamma_arg": format_rational(self.s),
            "mu_power": format_rational(self.s),
            "mu": format_rational(self.mu),
            "value": hp.nstr(self.value, 25),
        }


def _check_domain(s: Fraction, mu: Fraction):
    if s <= 0:
        raise DomainError(f"need Re(s) > 0, got s = {format_rational(s)}")
    if mu <= 0:
        raise DomainError(f"need Re(mu) > 0, got mu = {format_rational(mu)}")


def _generic_spec(a, b, m, ell, lam, mu, s) -> HypergeometricSpec:
    return HypergeometricSpec([-m, a, s], [-m - ell, b], Fraction(lam) / Fraction(mu), m)


def mellin_truncated_2f2(a, b, m: int, ell: int, lam, mu, s) -> MellinValue:
    """Generic reduction: the 3F2 at lam/mu summed exactly over m+1 terms."""
    a, b, lam, mu, s = (Fraction(x) for x in (a, b, lam, mu, s))
    if m < 0 or ell < 0:
        raise DomainError("m and l must be nonnegative integers")
    _check_domain(s, mu)
    spec = _generic_spec(a, b, m, ell, lam, mu, s)
    return MellinValue(eval_truncated(spec), s, mu)


def polynomial_coefficients(a, b, m: int, ell: int, lam) -> list:
    """Coefficients p_n of t^n in 2F2[-m, a; -m-l, b; lam t]_m."""
    spec = HypergeometricSpec([-m, a], [-m - ell, b], lam, m)
    pole = first_pole(spec, m)
    if pole is not None:
        raise PoleInRange(f"denominator vanishes at term {pole}")
    out = []
    t = Fraction(1)
    for n in range(m + 1):
        out.append(t)
        if n == m:
            break
        t = t * (-m + n) * (Fraction(a) + n) * Fraction(lam) / ((-m - ell + n) * (Fraction(b) + n) * (n + 1))
    return out


def mellin_termwise(a, b, m: int, ell: int, lam, mu, s) -> MellinValue:
    """Transform each monomial separately: t^n -> Gamma(s+n)/mu^(s+n)."""
    a, b, lam, mu, s = (Fraction(x) for x in (a, b, lam, mu, s))
    _check_domain(s, mu)
    coeff = Fraction(0)
    for n, p in enumerate(polynomial_coefficients(a, b, m, ell, lam)):
        coeff += p * rising(s, n) / mu**n
    return MellinValue(coeff, s, mu)


# -- quadrature -------------------------------------------------------------


def _laguerre(n: int, alpha, x):
    """L_n^(alpha)(x) and L_(n-1)^(alpha)(x) by the three-term recurrence."""
    prev, cur = hp.one, 1 + alpha - x
    if n == 0:
        return prev, hp.zero
    for j in range(1, n):
        prev, cur = cur, ((2 * j + 1 + alpha - x) * cur - (j + alpha) * prev) / (j + 1)
    return cur, prev


@functools.lru_cache(maxsize=256)
def gauss_laguerre(n: int, s: Fraction) -> tuple:
    """Nodes and weights for int_0^oo u^(s-1) e^(-u) f(u) du, exact for deg f < 2n.

    Double-precision roots seed a Newton iteration in working precision.
    """
    alpha = to_mpf(s) - 1
    guesses, _ = roots_genlaguerre(n, float(s) - 1)
    if not np.all(np.isfinite(guesses)):
        raise QuadratureFailure(f"no starting nodes for n={n}, s={format_rational(s)}")
    eps = hp.mpf(10) ** (-(hp.dps - 5))
    nodes = []
    for g in guesses:
        x = hp.mpf(float(g))
        for _ in range(60):
            ln, lm1 = _laguerre(n, alpha, x)
            deriv = (n * ln - (n + alpha) * lm1) / x
            dx = ln / deriv
            x -= dx
            if abs(dx) <= eps * abs(x):
                break
        else:
            raise QuadratureFailure(f"Newton iteration did not settle near node {g}")
        nodes.append(x)
    nodes.sort()
    if any(b - a <= eps * b for a, b in zip(nodes, nodes[1:])):
        raise QuadratureFailure("Newton iteration merged two nodes")
    scale = hp.gamma(n + alpha + 1) / (hp.factorial(n) * (n + 1) ** 2)
    weights = []
    for x in nodes:
        l_next, _ = _laguerre(n + 1, alpha, x)
        weights.append(scale * x / l_next**2)
    total = hp.fsum(weights)
    expected = hp.gamma(alpha + 1)
    if abs(total - expected) > hp.mpf(10) ** -25 * expected:
        raise QuadratureFailure("weights do not integrate the constant function")
    return tuple(nodes), tuple(weights)


def quadrature_nodes(degree: int) -> int:
    return max(degree + 2, 20)


def mellin_quadrature_raw(a, b, m: int, ell: int, lam, mu, s, abs_tol: float = 1e-12):
    """Numeric transform by Gauss-Laguerre after substituting u = mu t.

    Two rules of different size must agree to ``abs_tol`` relative to the
    integral of |P|, which stays meaningful when the transform vanishes.
    """
    a, b, lam, mu, s = (Fraction(x) for x in (a, b, lam, mu, s))
    _check_domain(s, mu)
    coeffs = [to_mpf(c) for c in polynomial_coefficients(a, b, m, ell, lam)]
    mu_f = to_mpf(mu)
    results = []
    scale = hp.zero
    for n in (quadrature_nodes(m), quadrature_nodes(m) + 2):
        nodes, weights = gauss_laguerre(n, s)
        acc = hp.zero
        mag = hp.zero
        for u, w in zip(nodes, weights):
            term = w * hp.polyval(coeffs[::-1], u / mu_f)
            acc += term
            mag += abs(term)
        results.append(acc / hp.power(mu_f, to_mpf(s)))
        scale = mag / hp.power(mu_f, to_mpf(s))
    if abs(results[0] - results[1]) > abs_tol * scale:
        raise QuadratureFailure("quadrature rules of different size disagree")
    return results[1]


# -- the sixteen cases ------------------------------------------------------


@dataclass(frozen=True)
class CaseSpec:
    case_id: str
    theorem: str
    params: tuple
    order: object
    ell: object
    a: object
    b: object
    s: object
    conditions: tuple
    zero: bool = False


def _c(text, expr, kind="nn"):
    return (text, expr, kind)


CASES = {
    c.case_id: c
    for c in [
        CaseSpec("I", "watson.trunc-m", ("m", "alpha", "beta"),
                 lambda b: b.m, lambda b: b.m, lambda b: b.alpha, lambda b: (1 + b.alpha + b.beta) / 2,
                 lambda b: b.beta,
                 (_c("alpha", lambda b: b.alpha), _c("(1+alpha+beta)/2", lambda b: (1 + b.alpha + b.beta) / 2),
                  _c("beta", lambda b: b.beta, "pos"))),
        CaseSpec("II", "watson.trunc-2m", ("m", "k", "beta"),
                 lambda b: 2 * b.m, lambda b: 2 * b.k + 1, lambda b: -b.m - b.k - HALF,
                 lambda b: (1 + b.beta) / 2 - b.m, lambda b: b.beta,
                 (_c("(1+beta)/2-m", lambda b: (1 + b.beta) / 2 - b.m), _c("beta", lambda b: b.beta, "pos"))),
        CaseSpec("III", "watson.trunc-2m1", ("m", "k", "beta"),
                 lambda b: 2 * b.m + 1, lambda b: 2 * b.k, lambda b: -b.m - b.k - HALF,
                 lambda b: b.beta / 2 - b.m, lambda b: b.beta,
                 (_c("beta/2-m", lambda b: b.beta / 2 - b.m), _c("beta", lambda b: b.beta, "pos")), zero=True),
        CaseSpec("IV", "saalschutz.trunc", ("m", "k", "alpha", "beta"),
                 lambda b: b.m, lambda b: b.k, lambda b: b.alpha, lambda b: 1 + b.alpha + b.beta + b.k,
                 lambda b: b.beta,
                 (_c("alpha", lambda b: b.alpha), _c("1+alpha+beta+k", lambda b: 1 + b.alpha + b.beta + b.k),
                  _c("beta", lambda b: b.beta, "pos"))),
        CaseSpec("V", "saalschutz.trunc-b", ("m", "k", "beta", "gamma"),
                 lambda b: b.m, lambda b: b.k, lambda b: b.beta - b.k - 1,
                 lambda b: b.beta - b.gamma - b.m - b.k, lambda b: -b.m - b.k - b.gamma,
                 (_c("beta-k-1", lambda b: b.beta - b.k - 1),
                  _c("beta-gamma-m-k", lambda b: b.beta - b.gamma - b.m - b.k),
                  _c("-m-k-gamma", lambda b: -b.m - b.k - b.gamma, "pos"))),
        CaseSpec("VI", "whipple.trunc-m", ("m", "k", "alpha"),
                 lambda b: b.m, lambda b: b.m + b.k, lambda b: 1 - b.alpha, lambda b: Fraction(1 + b.k),
                 lambda b: b.alpha,
                 (_c("1-alpha", lambda b: 1 - b.alpha), _c("alpha", lambda b: b.alpha, "pos"))),
        CaseSpec("VII", "whipple.trunc-2m-a", ("m", "k", "beta"),
                 lambda b: 2 * b.m, lambda b: 2 * b.k, lambda b: Fraction(1 + 2 * b.m),
                 lambda b: 1 + 2 * b.m + 2 * b.k + 2 * b.beta, lambda b: b.beta,
                 (_c("1+2m+2k+2beta", lambda b: 1 + 2 * b.m + 2 * b.k + 2 * b.beta),
                  _c("beta", lambda b: b.beta, "pos"))),
        CaseSpec("VIII", "whipple.trunc-2m-b", ("m", "k", "beta"),
                 lambda b: 2 * b.m, lambda b: 2 * b.k + 1, lambda b: Fraction(1 + 2 * b.m),
                 lambda b: 2 + 2 * b.m + 2 * b.k + 2 * b.beta, lambda b: b.beta,
                 (_c("2+2m+2k+2beta", lambda b: 2 + 2 * b.m + 2 * b.k + 2 * b.beta),
                  _c("beta", lambda b: b.beta, "pos"))),
        CaseSpec("IX", "whipple.trunc-2m1-a", ("m", "k", "beta"),
                 lambda b: 2 * b.m + 1, lambda b: 2 * b.k, lambda b: Fraction(2 + 2 * b.m),
                 lambda b: 2 + 2 * b.m + 2 * b.k + 2 * b.beta, lambda b: b.beta,
                 (_c("2+2m+2k+2beta", lambda b: 2 + 2 * b.m + 2 * b.k + 2 * b.beta),
                  _c("beta", lambda b: b.beta, "pos"))),
        CaseSpec("X", "whipple.trunc-2m1-b", ("m", "k", "beta"),
                 lambda b: 2 * b.m + 1, lambda b: 2 * b.k + 1, lambda b: Fraction(2 + 2 * b.m),
                 lambda b: 3 + 2 * b.m + 2 * b.k + 2 * b.beta, lambda b: b.beta,
                 (_c("3+2m+2k+2beta", lambda b: 3 + 2 * b.m + 2 * b.k + 2 * b.beta),
                  _c("beta", lambda b: b.beta, "pos"))),
        CaseSpec("XI", "dixon.trunc-a", ("m", "k", "gamma"),
                 lambda b: 2 * b.m, lambda b: b.k, lambda b: Fraction(1 + b.k), lambda b: 1 - 2 * b.m - b.gamma,
                 lambda b: b.gamma,
                 (_c("1-2m-gamma", lambda b: 1 - 2 * b.m - b.gamma), _c("gamma", lambda b: b.gamma, "pos"))),
        CaseSpec("XII", "dixon.trunc-b", ("m", "k"),
                 lambda b: 2 * b.m, lambda b: b.k, lambda b: Fraction(1 + b.k), lambda b: Fraction(-2 * b.m - b.k),
                 lambda b: Fraction(1 + b.k), ()),
        CaseSpec("XIII", "dixon.trunc-c", ("m", "k", "gamma"),
                 lambda b: 2 * b.m + 1, lambda b: b.k, lambda b: b.gamma, lambda b: -2 * b.m - b.gamma,
                 lambda b: Fraction(1 + b.k),
                 (_c("gamma", lambda b: b.gamma), _c("-2m-gamma", lambda b: -2 * b.m - b.gamma)), zero=True),
        CaseSpec("XIV", "dixon.trunc-d", ("m", "k"),
                 lambda b: 2 * b.m + 1, lambda b: b.k, lambda b: Fraction(1 + b.k),
                 lambda b: Fraction(-2 * b.m - b.k - 1), lambda b: Fraction(1 + b.k), (), zero=True),
        CaseSpec("XV", "dixon.trunc-e", ("m", "k", "alpha"),
                 lambda b: 2 * b.m, lambda b: b.k, lambda b: b.alpha, lambda b: 1 + b.alpha + 2 * b.m,
                 lambda b: 1 + b.alpha + 2 * b.m + b.k,
                 (_c("alpha", lambda b: b.alpha), _c("1+alpha+2m", lambda b: 1 + b.alpha + 2 * b.m),
                  _c("1+alpha+2m+k", lambda b: 1 + b.alpha + 2 * b.m + b.k, "pos"))),
        CaseSpec("XVI", "dixon.trunc-f", ("m", "k", "alpha"),
                 lambda b: 2 * b.m + 1, lambda b: b.k, lambda b: b.alpha, lambda b: 2 + b.alpha + 2 * b.m,
                 lambda b: 2 + b.alpha + 2 * b.m + b.k,
                 (_c("alpha", lambda b: b.alpha), _c("2+alpha+2m", lambda b: 2 + b.alpha + 2 * b.m),
                  _c("2+alpha+2m+k", lambda b: 2 + b.alpha + 2 * b.m + b.k, "pos"))),
    ]
}

CASE_IDS = tuple(CASES)


@dataclass(frozen=True)
class MellinInstance:
    case_id: str
    order: int
    ell: int
    a: Fraction
    b: Fraction
    s: Fraction
    mu: Fraction
    lam: Fraction
    binding: Binding = field(default_factory=Binding)

    @property
    def generic(self) -> bool:
        return self.case_id == "generic"

    def as_dict(self) -> dict:
        out = {"case": self.case_id}
        out.update(self.binding.as_dict())
        out.update({
            "order": self.order,
            "ell": self.ell,
            "a": format_rational(self.a),
            "b": format_rational(self.b),
            "s": format_rational(self.s),
            "mu": format_rational(self.mu),
            "lambda": format_rational(self.lam),
        })
        return out


def generic_instance(m: int, ell: int, a, b, s, mu, lam=None) -> MellinInstance:
    mu = Fraction(mu)
    lam = mu if lam is None else Fraction(lam)
    _check_domain(Fraction(s), mu)
    return MellinInstance("generic", int(m), int(ell), Fraction(a), Fraction(b), Fraction(s), mu, lam)


def _holds(kind, v) -> bool:
    return v > 0 if kind == "pos" else not is_nonpositive_integer(v)


def case_instance(case_id: str, params: dict, mu, permissive: bool = False) -> MellinInstance:
    """Bind a case: (order, l, a, b, s) follow from m, k and the case parameters, with lam = mu.

    Besides the printed conditions, the generic 3F2 must have no pole among
    its summed terms.
    """
    case = get_case(case_id)
    values = {}
    for name, v in params.items():
        if v is None:
            continue
        if name not in case.params:
            raise UnknownParameter(f"case {case.case_id} has no parameter {name!r} (expects {', '.join(case.params)})")
        values[name] = int(v) if name in ("m", "k") else Fraction(v)
    missing = [p for p in case.params if p not in values]
    if missing:
        raise UnknownParameter(f"case {case.case_id} is missing parameter(s): {', '.join(missing)}")
    b = Binding(**values)
    lowest = 0 if permissive else 1
    for name in ("m", "k"):
        v = getattr(b, name)
        if v is not None and v < lowest:
            raise SideConditionViolated(f"{name} in {'N0' if permissive else 'N'}", f"{name} = {v}")
    mu = Fraction(mu)
    if mu <= 0:
        raise SideConditionViolated("Re(mu) > 0", f"mu = {format_rational(mu)}")
    for text, expr, kind in case.conditions:
        v = Fraction(expr(b))
        if not _holds(kind, v):
            label = f"Re({text}) > 0" if kind == "pos" else f"{text} not in Z0-"
            raise SideConditionViolated(label, f"value {format_rational(v)}")
    inst = MellinInstance(case.case_id, int(case.order(b)), int(case.ell(b)), Fraction(case.a(b)),
                          Fraction(case.b(b)), Fraction(case.s(b)), mu, mu, b)
    if inst.s <= 0:
        raise SideConditionViolated("Re(s) > 0", f"s = {format_rational(inst.s)}")
    pole = first_pole(_generic_spec(inst.a, inst.b, inst.order, inst.ell, inst.lam, inst.mu, inst.s), inst.order)
    if pole is not None:
        raise SideConditionViolated("no vanishing denominator among the summed terms", f"term {pole}")
    return inst


def get_case(case_id: str) -> CaseSpec:
    key = str(case_id).upper()
    if key not in CASES:
        raise UnknownParameter(f"unknown Mellin case {case_id!r}; expected one of {', '.join(CASE_IDS)}")
    return CASES[key]


def mellin_case_closed_form(instance: MellinInstance) -> MellinValue:
    """Printed right-hand side: Gamma(s)/mu^s times the linked summation theorem's value."""
    if instance.generic:
        raise ValueError("the generic instance has no case closed form")
    case = get_case(instance.case_id)
    try:
        coeff = Fraction(get_theorem(case.theorem).rhs(instance.binding))
    except ZeroDivisionError as exc:
        raise PoleInClosedForm(str(exc)) from None
    return MellinValue(coeff, instance.s, instance.mu)


def mellin_generic(instance: MellinInstance) -> MellinValue:
    i = instance
    return mellin_truncated_2f2(i.a, i.b, i.order, i.ell, i.lam, i.mu, i.s)


def mellin_symbolic(instance: MellinInstance) -> MellinValue:
    i = instance
    return mellin_termwise(i.a, i.b, i.order, i.ell, i.lam, i.mu, i.s)


def mellin_quadrature(instance: MellinInstance, abs_tol: float = 1e-12):
    i = instance
    return mellin_quadrature_raw(i.a, i.b, i.order, i.ell, i.lam, i.mu, i.s, abs_tol)


@dataclass
class MellinReport:
    instance: MellinInstance
    verdict: str
    closed_form: Optional[MellinValue] = None
    generic: Optional[MellinValue] = None
    symbolic: Optional[MellinValue] = None
    quadrature: object = None
    coefficient_match: Optional[bool] = None
    quad_rel_diff: object = None
    quad_tol: Optional[float] = None
    diagnostics: str = ""

    @property
    def equal(self) -> bool:
        return self.verdict == "equal"

    def as_dict(self) -> dict:
        out = {"instance": self.instance.as_dict(), "verdict": self.verdict}
        for name in ("closed_form", "generic", "symbolic"):
            v = getattr(self, name)
            if v is not None:
                out[name] = v.as_dict()
        if self.coefficient_match is not None:
            out["coefficient_match"] = self.coefficient_match
        if self.quadrature is not None:
            out["quadrature"] = hp.nstr(self.quadrature, 25)
            out["quad_rel_diff"] = hp.nstr(self.quad_rel_diff, 5)
            out["quad_tol"] = self.quad_tol
        if self.diagnostics:
            out["diagnostics"] = self.diagnostics
        return out


def verify_mellin_case(instance: MellinInstance, quad_tol: Optional[float] = 1e-10) -> MellinReport:
    """Compare the case closed form with the generic reduction exactly, then with quadrature.

    ``quad_tol=None`` skips the quadrature.  For a zero closed form the
    quadrature discrepancy is measured against the largest monomial
    contribution instead.
    """
    try:
        generic = mellin_generic(instance)
        symbolic = mellin_symbolic(instance)
        closed = mellin_case_closed_form(instance) if not instance.generic else generic
    except (ClausenError, ZeroDivisionError) as exc:
        return MellinReport(instance, "inapplicable", diagnostics=f"{type(exc).__name__}: {exc}")
    match = closed.coefficient == generic.coefficient == symbolic.coefficient
    report = MellinReport(instance, "equal" if match else "mismatch", closed, generic, symbolic,
                          coefficient_match=match)
    if quad_tol is None:
        return report
    try:
        q = mellin_quadrature(instance, abs_tol=quad_tol / 100)
    except ClausenError as exc:
        report.verdict = "inapplicable"
        report.diagnostics = f"{type(exc).__name__}: {exc}"
        return report
    ref = closed.value
    if ref != 0:
        rel = abs(q - ref) / abs(ref)
    else:
        scale = max(abs(to_mpf(p * rising(instance.s, n) / instance.mu**n))
                    for n, p in enumerate(polynomial_coefficients(instance.a, instance.b, instance.order,
                                                                  instance.ell, instance.lam)))
        rel = abs(q) / (scale * abs(MellinValue(Fraction(1), instance.s, instance.mu).value))
    report.quadrature, report.quad_rel_diff, report.quad_tol = q, rel, quad_tol
    if match and rel > quad_tol:
        report.verdict = "mismatch"
    return report


def random_case_instance(case_id: str, rng, m_max: int = 8, k_max: int = 8, bound: int = 10,
                         mu_bound: int = 10, max_attempts: int = 10000) -> MellinInstance:
    """Seeded valid binding with rational magnitudes at most ``bound``."""
    case = get_case(case_id)
    for _ in range(max_attempts):
        params = {}
        for name in case.params:
            if name == "m":
                params[name] = rng.randint(1, m_max)
            elif name == "k":
                params[name] = rng.randint(1, k_max)
            else:
                params[name] = random_rational(rng, bound)
        mu = Fraction(rng.randint(1, mu_bound), rng.randint(1, mu_bound))
        try:
            inst = case_instance(case.case_id, params, mu)
            mellin_case_closed_form(inst)
        except (SideConditionViolated, PoleInClosedForm):
            continue
        return inst
    raise ClausenError(f"no valid binding for case {case.case_id} after {max_attempts} draws")
