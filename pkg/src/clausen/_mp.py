"""Private mpmath contexts.

The global ``mpmath.mp`` context is process-wide mutable state, so the package
works in its own fixed-precision contexts that are never modified after import.
"""
from fractions import Fraction

import mpmath

#: Working precision of every RealHP value returned by the package.
WORKING_DPS = 40

hp = mpmath.MPContext()
hp.dps = WORKING_DPS

# Scratch context for cancellation-prone internals (Spouge sums, quadrature).
xp = mpmath.MPContext()
xp.dps = 90


def to_mpf(x, ctx=hp):
    """Convert int, Fraction, float, str or mpf to an mpf of ``ctx``."""
    if isinstance(x, Fraction):
        return ctx.mpf(x.numerator) / x.denominator
    if hasattr(x, "_mpf_"):
        return +ctx.make_mpf(x._mpf_)
    return ctx.mpf(x)
