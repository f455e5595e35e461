"""Exact and high-precision verification of summation theorems for Clausen 3F2 series.

Submodules:
    rational   Pochhammer symbols over exact rationals
    series     pFq evaluation: truncated, terminating, reversed and numeric
    gamma      Gamma function in working precision
    catalog    Watson, Saalschutz, Whipple and Dixon theorems
    mellin     Mellin transforms of exp(-mu t) times truncated 2F2 polynomials
    sweep      seeded randomized checks and JSON reports
"""

__version__ = "0.1.0"

from .errors import ClausenError  # noqa: E402
from .rational import POLE, parse_rational, pochhammer_exact  # noqa: E402
from .series import (  # noqa: E402
    HypergeometricSpec,
    convergence_info,
    eval_exact,
    eval_nonterminating_float,
    eval_terminating,
    eval_truncated,
    reverse_terminating,
    reverse_truncated,
    split_negative_denominator,
)

__all__ = [
    "__version__",
    "ClausenError",
    "POLE",
    "parse_rational",
    "pochhammer_exact",
    "HypergeometricSpec",
    "convergence_info",
    "eval_exact",
    "eval_nonterminating_float",
    "eval_terminating",
    "eval_truncated",
    "reverse_terminating",
    "reverse_truncated",
    "split_negative_denominator",
]
