"""Command-line front end.

Exit codes: 0 all equal, 1 mismatch, 2 invalid instance, 3 evaluation or
internal error.
"""
from __future__ import annotations

import json
import sys
from fractions import Fraction

import click

from . import __version__
from ._mp import hp
from .catalog import (
    CATALOG,
    format_value,
    get_theorem,
    instantiate,
    list_edges,
    list_theorems,
    verify,
)
from .errors import (
    ClausenError,
    DomainError,
    ParseError,
    PoleInRange,
    SideConditionViolated,
    UnknownParameter,
    UnknownTheorem,
)
from .mellin import CASES, case_instance, generic_instance, verify_mellin_case
from .rational import format_rational, parse_rational, parse_rational_list
from .series import HypergeometricSpec, eval_exact, eval_nonterminating_float, eval_truncated, terminating_order
from .sweep import SweepConfig, run_sweep, write_report

EXIT_EQUAL, EXIT_MISMATCH, EXIT_INVALID, EXIT_ERROR = 0, 1, 2, 3

INVALID = (ParseError, SideConditionViolated, UnknownParameter, UnknownTheorem, DomainError, PoleInRange)


def _fail(exc: Exception, as_json: bool) -> int:
    code = EXIT_INVALID if isinstance(exc, INVALID) else EXIT_ERROR
    payload = {"error": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, SideConditionViolated):
        payload["condition"] = exc.condition
    if as_json:
        click.echo(json.dumps(payload, indent=2, ensure_ascii=False))
    else:
        click.echo(f"error: {payload['error']}: {payload['message']}", err=True)
    return code


def _rational(value):
    return None if value is None else parse_rational(value)


def _echo_json(obj):
    click.echo(json.dumps(obj, indent=2, ensure_ascii=False))


@click.group()
@click.version_option(__version__, prog_name="clausen")
def main():
    """Evaluate hypergeometric series and verify Clausen summation theorems."""


@main.command("eval")
@click.option("--num", "num", default="", help='Numerator parameters, e.g. "-1,1,1".')
@click.option("--den", "den", default="", help='Denominator parameters, e.g. "-2,1".')
@click.option("--z", "z", default="1", show_default=True)
@click.option("--truncate", type=int, default=None, help="Sum only terms 0..m.")
@click.option("--float", "as_float", is_flag=True, help="Print a decimal value.")
@click.option("--tol", type=float, default=1e-15, show_default=True, help="Relative tolerance for infinite series.")
@click.option("--json", "as_json", is_flag=True)
def cmd_eval(num, den, z, truncate, as_float, tol, as_json):
    """Evaluate pFq[num; den; z], exactly when the sum is finite."""
    try:
        spec = HypergeometricSpec(parse_rational_list(num), parse_rational_list(den), parse_rational(z), truncate)
        if truncate is not None:
            value = eval_truncated(spec)
        elif terminating_order(spec) is not None or spec.z == 0:
            value = eval_exact(spec)
        else:
            value = eval_nonterminating_float(spec, rel_tol=tol).value
    except (ClausenError, ValueError) as exc:
        sys.exit(_fail(exc, as_json))
    if isinstance(value, Fraction) and as_float:
        value = hp.mpf(value.numerator) / value.denominator
    text = format_value(value, 30)
    if as_json:
        _echo_json({"series": str(spec), "value": text, "exact": isinstance(value, Fraction)})
    else:
        click.echo(text)


def _param_options(fn):
    for name in ("delta", "gamma", "beta", "alpha"):
        fn = click.option(f"--{name}", default=None, help=f"Rational {name} as p/q.")(fn)
    fn = click.option("--k", type=int, default=None)(fn)
    fn = click.option("--m", type=int, default=None)(fn)
    return fn


@main.command("verify")
@click.option("--id", "theorem_id", required=True, help="Theorem id (watson.trunc-m) or equation tag (2.4).")
@_param_options
@click.option("--float", "as_float", is_flag=True, help="Verify numerically even for exact entries.")
@click.option("--tol", type=float, default=1e-10, show_default=True)
@click.option("--permissive", is_flag=True, help="Also allow m = 0 and k = 0.")
@click.option("--json", "as_json", is_flag=True)
def cmd_verify(theorem_id, m, k, alpha, beta, gamma, delta, as_float, tol, permissive, as_json):
    """Check one theorem instance: LHS series against the closed form."""
    try:
        params = {"m": m, "k": k, "alpha": _rational(alpha), "beta": _rational(beta),
                  "gamma": _rational(gamma), "delta": _rational(delta)}
        inst = instantiate(theorem_id, {n: v for n, v in params.items() if v is not None},
                           mode="float" if as_float else None, permissive=permissive)
    except (ClausenError, ValueError) as exc:
        sys.exit(_fail(exc, as_json))
    report = verify(inst, float_tol=tol)
    if as_json:
        _echo_json(report.as_dict())
    else:
        t = inst.theorem
        click.echo(f"{t.key} ({t.equation}) [{inst.mode}]: {report.verdict}")
        click.echo(f"  lhs = {format_value(report.lhs)}")
        click.echo(f"  rhs = {format_value(report.rhs)}")
        if inst.mode == "float" and report.rel_diff is not None:
            click.echo(f"  rel_diff = {hp.nstr(report.rel_diff, 5)} (tol {tol:g})")
        if report.diagnostics:
            click.echo(f"  {report.diagnostics}")
    sys.exit({"equal": EXIT_EQUAL, "mismatch": EXIT_MISMATCH}.get(report.verdict, EXIT_ERROR))


@main.command("sweep")
@click.option("--theorems", default="all", show_default=True, help='Comma-separated ids, or "all".')
@click.option("--trials", type=int, default=100, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--m-max", type=int, default=8, show_default=True)
@click.option("--k-max", type=int, default=8, show_default=True)
@click.option("--bound", type=int, default=20, show_default=True, help="Max |numerator| and denominator.")
@click.option("--tol", type=float, default=1e-10, show_default=True)
@click.option("--jobs", type=int, default=1, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Report path (stdout if omitted).")
@click.option("--timings", is_flag=True, help="Add per-record timings (makes reports non-reproducible).")
def cmd_sweep(theorems, trials, seed, m_max, k_max, bound, tol, jobs, out, timings):
    """Seeded random bindings for each theorem; writes a JSON report."""
    try:
        config = SweepConfig([t.strip() for t in theorems.split(",") if t.strip()], trials, seed,
                             m_max, k_max, bound, tol, timings)
        config.theorem_ids()
        doc = run_sweep(config, jobs=jobs)
        text = write_report(doc, out)
    except (ClausenError, ValueError) as exc:
        sys.exit(_fail(exc, False))
    except OSError as exc:
        click.echo(f"error: {type(exc).__name__}: {exc}", err=True)
        sys.exit(EXIT_ERROR)
    if out is None:
        click.echo(text, nl=False)
    s = doc["summary"]
    click.echo(f"{s['total']} instances: {s['equal']} equal, {s['mismatch']} mismatch, "
               f"{s['inapplicable']} inapplicable", err=True)
    sys.exit(EXIT_MISMATCH if s["mismatch"] else EXIT_EQUAL)


@main.command("mellin")
@click.option("--case", "case_id", required=True, help="I..XVI, or generic.")
@_param_options
@click.option("--mu", default="1", show_default=True)
@click.option("--ell", type=int, default=None, help="generic only")
@click.option("--a", "a", default=None, help="generic only")
@click.option("--b", "b", default=None, help="generic only")
@click.option("--s", "s", default=None, help="generic only")
@click.option("--lam", default=None, help="generic only (defaults to mu)")
@click.option("--quad", is_flag=True, help="Also compare against Gauss-Laguerre quadrature.")
@click.option("--tol", type=float, default=1e-10, show_default=True, help="Quadrature tolerance.")
@click.option("--permissive", is_flag=True)
@click.option("--json", "as_json", is_flag=True)
def cmd_mellin(case_id, m, k, alpha, beta, gamma, delta, mu, ell, a, b, s, lam, quad, tol, permissive, as_json):
    """Mellin transform of exp(-mu t) times a truncated 2F2, closed form against the generic sum."""
    try:
        if case_id.lower() == "generic":
            if None in (m, ell, a, b, s):
                raise UnknownParameter("generic needs --m, --ell, --a, --b and --s")
            inst = generic_instance(m, ell, parse_rational(a), parse_rational(b), parse_rational(s),
                                    parse_rational(mu), _rational(lam))
        else:
            params = {"m": m, "k": k, "alpha": _rational(alpha), "beta": _rational(beta),
                      "gamma": _rational(gamma), "delta": _rational(delta)}
            inst = case_instance(case_id, {n: v for n, v in params.items() if v is not None},
                                 parse_rational(mu), permissive=permissive)
    except (ClausenError, ValueError) as exc:
        sys.exit(_fail(exc, as_json))
    report = verify_mellin_case(inst, quad_tol=tol if quad else None)
    if as_json:
        _echo_json(report.as_dict())
    elif report.closed_form is None:
        click.echo(f"case {inst.case_id}: {report.verdict}")
    else:
        cf = report.closed_form
        click.echo(f"case {inst.case_id}: {report.verdict}")
        click.echo(f"  coefficient = {format_rational(cf.coefficient)}")
        click.echo(f"  generic     = {format_rational(report.generic.coefficient)}")
        click.echo(f"  factor      = Gamma({format_rational(cf.s)}) / ({format_rational(cf.mu)})^({format_rational(cf.s)})")
        click.echo(f"  value       = {format_value(cf.value)}")
        if report.quadrature is not None:
            click.echo(f"  quadrature  = {format_value(report.quadrature)} (rel diff {hp.nstr(report.quad_rel_diff, 3)})")
    if report.diagnostics:
        click.echo(f"  {report.diagnostics}", err=True)
    sys.exit({"equal": EXIT_EQUAL, "mismatch": EXIT_MISMATCH}.get(report.verdict, EXIT_ERROR))


@main.command("list")
@click.option("--json", "as_json", is_flag=True)
def cmd_list(as_json):
    """Show the theorem catalog, derivation edges and Mellin cases."""
    theorems = [CATALOG[key].as_dict() for key in list_theorems()]
    edges = [{"child": e.child, "parent": e.parent, "substitution": e.substitution} for e in list_edges()]
    cases = [{"case": c.case_id, "theorem": c.theorem, "params": list(c.params), "zero": c.zero}
             for c in CASES.values()]
    if as_json:
        _echo_json({"theorems": theorems, "edges": edges, "mellin_cases": cases})
        return
    click.echo(f"{len(theorems)} theorems")
    for t in theorems:
        terms = f"  {t['terms']} terms" if t["terms"] else ""
        click.echo(f"  {t['id']:<24} ({t['equation']:<5}) {t['mode']:<5} {','.join(t['params']):<24}{terms}")
    click.echo(f"{len(edges)} derivation edges")
    for e in edges:
        click.echo(f"  {e['parent']:<24} -> {e['child']:<24} {e['substitution']}")
    click.echo(f"{len(cases)} Mellin cases")
    for c in cases:
        click.echo(f"  {c['case']:<5} via {get_theorem(c['theorem']).equation:<5} {','.join(c['params'])}")


if __name__ == "__main__":
    main()
