"""Real Gamma, log-Gamma and floating Pochhammer at extended precision.

Gamma is evaluated with Spouge's approximation

    Gamma(z+1) = (z+a)^(z+1/2) e^-(z+a) [c_0 + sum_{k=1}^{a-1} c_k/(z+k) + err]

with the fixed parameter a = 60, for which |err| < a^-1/2 (2 pi)^-(a+1/2)
(about 1e-49 relative).  The coefficients c_k alternate in sign and reach
roughly e^a in size, so they and the sum are formed in a 90-digit scratch
context; results are rounded to the 40-digit working context.  Arguments
below 1/2 go through the reflection formula.
"""
from __future__ import annotations

import threading
from fractions import Fraction

from ._mp import hp, to_mpf, xp
from .errors import DomainError, PoleAtNonpositiveInteger

SPOUGE_A = 60

_coeffs = None
_coeffs_lock = threading.Lock()


def spouge_coefficients():
    """(c_0, c_1, ..., c_{a-1}) in the scratch context, computed once."""
    global _coeffs
    if _coeffs is None:
        with _coeffs_lock:
            if _coeffs is None:
                a = SPOUGE_A
                cs = [xp.sqrt(2 * xp.pi)]
                fact = xp.mpf(1)
                for k in range(1, a):
                    if k > 1:
                        fact *= k - 1
                    c = xp.power(a - k, k - xp.mpf(1) / 2) * xp.exp(a - k) / fact
                    cs.append(c if k % 2 == 1 else -c)
                _coeffs = tuple(cs)
    return _coeffs


def _is_nonpositive_integer(x) -> bool:
    if isinstance(x, Fraction):
        return x.denominator == 1 and x <= 0
    if isinstance(x, int):
        return x <= 0
    v = to_mpf(x, xp)
    return v <= 0 and v == xp.floor(v)


def _spouge_series(z):
    """Bracketed Spouge sum at z (z > -1/2), in the scratch context."""
    cs = spouge_coefficients()
    s = cs[0]
    for k in range(1, SPOUGE_A):
        s += cs[k] / (z + k)
    return s


def _gamma_xp(x):
    """Gamma(x) in the scratch context; x is an xp mpf, not a pole."""
    if x < 0.5:
        return xp.pi / (xp.sinpi(x) * _gamma_xp(1 - x))
    z = x - 1
    t = z + SPOUGE_A
    return xp.power(t, z + 0.5) * xp.exp(-t) * _spouge_series(z)


def gamma_real(x):
    """Gamma(x) for real x that is not a nonpositive integer.

    >>> float(gamma_real(5))
    24.0
    """
    if _is_nonpositive_integer(x):
        raise PoleAtNonpositiveInteger(f"Gamma has a pole at {x}")
    return +hp.convert(_gamma_xp(to_mpf(x, xp)))


def rgamma_real(x):
    """1/Gamma(x), which is zero at the nonpositive integers."""
    if _is_nonpositive_integer(x):
        return hp.zero
    return +hp.convert(1 / _gamma_xp(to_mpf(x, xp)))


def log_gamma(x):
    """ln Gamma(x) for x > 0, without forming Gamma(x) itself."""
    v = to_mpf(x, xp)
    if v <= 0:
        raise DomainError(f"log_gamma needs x > 0, got {x}")
    shift = xp.zero
    if v < 0.5:
        shift = xp.log(v)
        v += 1
    z = v - 1
    t = z + SPOUGE_A
    out = (z + 0.5) * xp.log(t) - t + xp.log(_spouge_series(z)) - shift
    return +hp.convert(out)


def pochhammer_float(alpha, n: int):
    """alpha (alpha+1) ... (alpha+n-1) in the working context."""
    if n < 0:
        raise ValueError("pochhammer_float needs n >= 0")
    a = to_mpf(alpha)
    out = hp.one
    for i in range(n):
        out *= a + i
    return out
