"""Acceptance criteria, one test each, at the stated tolerances.

Each test prints a PASS/FAIL line through the ``criterion`` fixture; the
lines are repeated in the pytest terminal summary.
"""
import math
import subprocess
import sys
import time
from fractions import Fraction

import mpmath

from clausen._mp import hp, to_mpf
from clausen.catalog import (
    CATALOG,
    derivation_check,
    instantiate,
    list_edges,
    list_theorems,
    random_binding,
    random_rational,
    rhs_closed_form,
    verify,
)
from clausen.gamma import gamma_real
from clausen.mellin import CASE_IDS, CASES, random_case_instance, verify_mellin_case
from clausen.rational import POLE, factorial_exact, pochhammer_exact
from clausen.series import (
    HypergeometricSpec,
    eval_exact,
    eval_truncated,
    first_pole,
    reverse_finite_sum,
    reverse_terminating,
    reverse_truncated,
    split_negative_denominator,
)
from clausen.sweep import SplitMix64, theorem_stream

from test_series import brute_sum, eps_oracle

F = Fraction
SEED = 20240601
EXACT_IDS = [t for t in list_theorems() if CATALOG[t].exact]
ZERO_IDS = [t for t in list_theorems() if CATALOG[t].is_zero]
FLOAT_IDS = [t for t in list_theorems() if not CATALOG[t].exact]


def _first(failures, limit=3):
    return "; ".join(failures[:limit])


def test_criterion_1_exact_identities(criterion):
    start = time.perf_counter()
    failures, count = [], 0
    for key in EXACT_IDS:
        rng = theorem_stream(SEED, key)
        for _ in range(200):
            report = verify(random_binding(key, rng, m_max=8, k_max=8, bound=20))
            count += 1
            if report.verdict != "equal":
                failures.append(f"{key} {report.as_dict()['params']} {report.verdict}")
    elapsed = time.perf_counter() - start
    ok = criterion(1, "exact identity suite", not failures and elapsed < 60 and len(EXACT_IDS) == 28,
                   f"{len(EXACT_IDS)} entries, {count} instances, {len(failures)} failures, {elapsed:.1f}s"
                   + (f"; {_first(failures)}" if failures else ""))
    assert ok


def test_criterion_2_zero_theorems(criterion):
    failures, count = [], 0
    for key in ZERO_IDS:
        rng = theorem_stream(SEED + 2, key)
        for _ in range(100):
            inst = random_binding(key, rng)
            count += 1
            if eval_exact(inst.lhs) != 0 or rhs_closed_form(inst) != 0:
                failures.append(f"{key} {inst.binding}")
    expected = {"watson.term-odd", "watson.trunc-2m1", "dixon.term-odd", "dixon.trunc-c", "dixon.trunc-d"}
    ok = criterion(2, "zero-value theorems", not failures and set(ZERO_IDS) == expected,
                   f"{', '.join(ZERO_IDS)}: {count} instances, {len(failures)} nonzero")
    assert ok


def test_criterion_3_float_identities(criterion):
    failures, count, worst = [], 0, hp.zero
    for key in FLOAT_IDS:
        rng = theorem_stream(SEED + 3, key)
        for _ in range(50):
            inst = random_binding(key, rng, float_margin=F(1, 4))
            report = verify(inst, 1e-10)
            count += 1
            if report.verdict != "equal":
                failures.append(f"{key} {report.as_dict()['params']} {report.verdict} {report.diagnostics}")
            else:
                worst = max(worst, report.rel_diff)
    rng = theorem_stream(SEED + 3, "reflect-vs-plain")
    agree, worst_agree = 0, hp.zero
    for _ in range(50):
        inst = random_binding("dixon.nt-reflect", rng)
        a = rhs_closed_form(inst)
        b = rhs_closed_form(instantiate("dixon.nt", inst.binding))
        rel = abs(a - b) / abs(b)
        worst_agree = max(worst_agree, rel)
        if rel > 1e-10:
            failures.append(f"reflected vs plain Dixon at {inst.binding}: {hp.nstr(rel, 3)}")
        agree += 1
    ok = criterion(3, "float identity suite", not failures,
                   f"{count} instances, worst rel {hp.nstr(worst, 3)}; reflected vs plain Dixon on {agree}, "
                   f"worst {hp.nstr(worst_agree, 3)}" + (f"; {_first(failures)}" if failures else ""))
    assert ok


def test_criterion_4_derivation_edges(criterion):
    failures, count = [], 0
    edges = list_edges()
    for edge in edges:
        rng = theorem_stream(SEED + 4, f"{edge.parent}->{edge.child}")
        for _ in range(50):
            inst = random_binding(edge.child, rng)
            params = {k: v for k, v in vars(inst.binding).items() if v is not None}
            count += 1
            try:
                ok = derivation_check(edge.child, edge.parent, params)
            except Exception as exc:  # any error is a failed check here
                ok = False
                params["error"] = f"{type(exc).__name__}: {exc}"
            if not ok:
                failures.append(f"{edge.parent}->{edge.child} {params}")
    ok = criterion(4, "derivation consistency", not failures and len(edges) == 21,
                   f"{len(edges)} edges, {count} checks, {len(failures)} failures"
                   + (f"; {_first(failures)}" if failures else ""))
    assert ok


def test_criterion_5_mellin(criterion):
    failures, count, worst = [], 0, hp.zero
    for case_id in CASE_IDS:
        rng = theorem_stream(SEED + 5, f"mellin:{case_id}")
        for _ in range(100):
            inst = random_case_instance(case_id, rng, bound=10, mu_bound=10)
            report = verify_mellin_case(inst, quad_tol=1e-8)
            count += 1
            if report.verdict != "equal" or (CASES[case_id].zero and report.closed_form.coefficient != 0):
                failures.append(f"{case_id} {inst.as_dict()} {report.verdict} {report.diagnostics}")
            else:
                worst = max(worst, report.quad_rel_diff)
    ok = criterion(5, "Mellin suite", not failures and len(CASE_IDS) == 16,
                   f"{len(CASE_IDS)} cases, {count} instances, worst quadrature rel {hp.nstr(worst, 3)}"
                   + (f"; {_first(failures)}" if failures else ""))
    assert ok


def _gamma_quotient(alpha, p):
    with mpmath.workdps(60):
        a = mpmath.mpf(alpha.numerator) / alpha.denominator
        if alpha.denominator == 1 and alpha <= 0:
            eps = mpmath.mpf(10) ** -30
            return mpmath.gamma(a + p + eps) / mpmath.gamma(a + eps)
        return mpmath.gamma(a + p) / mpmath.gamma(a)


def _product_oracle(alpha, p):
    out = F(1)
    if p >= 0:
        for i in range(p):
            out *= alpha + i
    else:
        for i in range(1, -p + 1):
            out /= alpha - i
    return out


def _pochhammer_failures(rng):
    failures = []
    for _ in range(1000):
        alpha = F(rng.randint(-20, 20), rng.randint(1, 3) if rng.randint(0, 1) else 1)
        p = rng.randint(-10, 10)
        got = pochhammer_exact(alpha, p)
        pole = alpha.denominator == 1 and p < 0 and (alpha <= 0 or alpha + p <= 0)
        if pole:
            if got is not POLE:
                failures.append(f"({alpha})_{p} should be a pole")
            continue
        if got is POLE:
            failures.append(f"({alpha})_{p} is not a pole")
            continue
        if alpha.denominator != 1 or alpha > 0:
            if got != _product_oracle(alpha, p):
                failures.append(f"({alpha})_{p} exact mismatch")
        ref = _gamma_quotient(alpha, p)
        if got == 0:
            if abs(ref) > 1e-20:
                failures.append(f"({alpha})_{p} should not vanish")
        elif abs(F(got) - F(str(mpmath.nstr(ref, 40)))) > F(1, 10**12) * abs(F(got)):
            failures.append(f"({alpha})_{p} float mismatch")
    return failures


def _random_spec(rng, terminating):
    m = rng.randint(0, 6)
    num = [random_rational(rng, 10) for _ in range(rng.randint(0, 3))]
    den = [random_rational(rng, 10) for _ in range(rng.randint(0, 3))]
    z = random_rational(rng, 10)
    if z == 0:
        z = F(1)
    if terminating:
        num = [F(-m)] + num
        den = [d if d.denominator != 1 or d > 0 or d < -m else d + F(1, 2) for d in den]
        return HypergeometricSpec(num, den, z), m
    return HypergeometricSpec(num, den, z, m), m


def _reversal_failures(rng):
    failures, done = [], 0
    while done < 200:
        spec, m = _random_spec(rng, terminating=False)
        if first_pole(spec, m) is not None or brute_sum(spec.numerator, spec.denominator, spec.z, m) == 0:
            continue
        try:
            rev = reverse_truncated(spec, m)
        except Exception:
            continue
        if rev.value() != brute_sum(spec.numerator, spec.denominator, spec.z, m):
            failures.append(f"truncated reversal {spec}")
        done += 1
    done = 0
    while done < 200:
        spec, m = _random_spec(rng, terminating=True)
        if first_pole(spec, m) is not None:
            continue
        try:
            rev = reverse_terminating(spec)
        except Exception:
            continue
        if rev.value() != brute_sum(spec.numerator, spec.denominator, spec.z, m):
            failures.append(f"terminating reversal {spec}")
        done += 1
    for _ in range(200):
        coeffs = [random_rational(rng, 20) for _ in range(rng.randint(1, 12))]
        rev = reverse_finite_sum(coeffs)
        if sum(rev) != sum(coeffs) or any(rev[n] != coeffs[len(coeffs) - 1 - n] for n in range(len(coeffs))):
            failures.append("finite-sum reversal")
    return failures


def _split_failures(rng):
    failures, worst, done = [], hp.zero, 0
    while done < 50:
        m = rng.randint(0, 4)
        ell = m + rng.randint(1, 4)
        params = [random_rational(rng, 10) for _ in range(3)]
        if any(x.denominator == 1 for x in params):
            continue
        z = F(rng.randint(-10, 10), 20)
        if z == 0:
            continue
        alpha, beta, gamma = params
        res = split_negative_denominator(HypergeometricSpec([-m, alpha, beta], [-ell, gamma], z), rel_tol=1e-20)
        oracle = eps_oracle(m, ell, alpha, beta, gamma, z)
        rel = abs(res.total - oracle) / max(abs(oracle), mpmath.mpf(10) ** -30)
        worst = max(worst, rel)
        if rel > 1e-8 or res.truncated_part != eval_truncated(HypergeometricSpec([-m, alpha, beta], [-ell, gamma], z), m):
            failures.append(f"split m={m} l={ell} {params} z={z}")
        done += 1
    return failures, worst


def test_criterion_6_conventions(criterion):
    rng = SplitMix64(SEED + 6)
    poch = _pochhammer_failures(rng)
    rev = _reversal_failures(rng)
    split, worst = _split_failures(rng)
    failures = poch + rev + split
    ok = criterion(6, "conventions suite", not failures,
                   f"pochhammer 1000 ({len(poch)} bad), reversals 3x200 ({len(rev)} bad), "
                   f"split 50 ({len(split)} bad, worst rel {hp.nstr(worst, 3)})"
                   + (f"; {_first(failures)}" if failures else ""))
    assert ok


def test_criterion_7_gamma(criterion):
    grid = [F(i, 10) for i in range(1, 501)]
    fe = max(abs(gamma_real(x + 1) - to_mpf(x) * gamma_real(x)) / abs(gamma_real(x + 1)) for x in grid)
    refl = max(abs(gamma_real(F(i, 100)) * gamma_real(1 - F(i, 100)) - hp.pi / hp.sinpi(hp.mpf(i) / 100))
               / (hp.pi / hp.sinpi(hp.mpf(i) / 100)) for i in range(1, 100))
    fact = max(abs(gamma_real(n + 1) - factorial_exact(n).numerator) / factorial_exact(n).numerator
               for n in range(21))
    ok = criterion(7, "gamma suite", fe <= 1e-13 and refl <= 1e-12 and fact <= 1e-14,
                   f"functional eq {hp.nstr(fe, 3)}, reflection {hp.nstr(refl, 3)}, factorial {hp.nstr(fact, 3)}")
    assert ok


def test_criterion_8_cli_determinism(criterion, tmp_path):
    outputs = []
    for name in ("a.json", "b.json"):
        path = tmp_path / name
        proc = subprocess.run([sys.executable, "-m", "clausen.cli", "sweep", "--seed", "42", "--out", str(path)],
                              capture_output=True, text=True)
        assert proc.returncode == 0, proc.stderr
        outputs.append(path.read_bytes())
    identical = outputs[0] == outputs[1]
    ok = criterion(8, "CLI determinism", identical,
                   f"two runs of sweep --seed 42, {len(outputs[0])} bytes each, identical={identical}")
    assert ok
