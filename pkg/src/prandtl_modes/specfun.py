"""Complex special functions: Pochhammer, Kummer M, Gamma, erf and erfi.

Kummer's M is evaluated by the compiled kernel (see ``_backend``); the Gamma
function uses a Lanczos approximation so no SciPy is needed at run time.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from .errors import NonConvergent, PoleArgument

INT_TOL = 1e-12
CROSSOVER = 30.0

_SQRT_PI = math.sqrt(math.pi)

# Lanczos coefficients, g = 7, n = 9
_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def nonpositive_integer(x, tol=INT_TOL):
    """True when ``x`` lies within ``tol`` of 0, -1, -2, ..."""
    x = complex(x)
    if abs(x.imag) > tol or x.real > tol:
        return False
    return abs(x.real - round(x.real)) <= tol


def pochhammer(a, n):
    """Rising factorial (a)_n = a (a+1) ... (a+n-1)."""
    if n < 0 or int(n) != n:
        raise ValueError("n must be a nonnegative integer")
    out = 1.0 + 0j
    a = complex(a)
    for j in range(int(n)):
        out *= a + j
    return out


def _gamma_right(z):
    # Lanczos sum, valid for Re z >= 1/2
    z = z - 1.0
    x = _LANCZOS[0]
    for i in range(1, len(_LANCZOS)):
        x += _LANCZOS[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return math.sqrt(2 * math.pi) * cmath.exp((z + 0.5) * cmath.log(t) - t) * x


def gamma_c(z):
    """Complex Gamma function.

    >>> abs(gamma_c(5) - 24) < 1e-12
    True
    """
    z = complex(z)
    if nonpositive_integer(z):
        raise PoleArgument(f"Gamma has a pole at {z}")
    if z.real < 0.5:
        return math.pi / (cmath.sin(math.pi * z) * _gamma_right(1.0 - z))
    return _gamma_right(z)


def rgamma(z):
    """1/Gamma(z), zero at the poles."""
    z = complex(z)
    if nonpositive_integer(z):
        return 0j
    if z.real < 0.5:
        return cmath.sin(math.pi * z) * _gamma_right(1.0 - z) / math.pi
    return 1.0 / _gamma_right(z)


@dataclass(frozen=True)
class KummerArgs:
    """Parameters of M(a, c, zeta); ``c`` may not be a nonpositive integer."""

    a: complex
    c: complex
    zeta: complex = 0j

    def __post_init__(self):
        if nonpositive_integer(self.c):
            raise PoleArgument(f"M(a, c, .) undefined for c = {self.c}")


def _dispatch_flags(a, c):
    gc = gamma_c(c)
    return (
        gc * rgamma(a),
        gc * rgamma(c - a),
        nonpositive_integer(a),
        nonpositive_integer(c - a),
    )


def _snap(a, c):
    """Move a (or c - a) onto the nonpositive integer it is within INT_TOL of.

    Otherwise a parameter like -1e-17 (roundoff from a frame rotation) keeps
    the series from terminating and picks up a spurious e^zeta component.
    """
    if nonpositive_integer(a):
        return complex(round(a.real)), c
    if nonpositive_integer(c - a):
        return c - round((c - a).real), c
    return a, c


def _check_status(status, a, c):
    if np.any(status != 0):
        code = int(np.max(status))
        reason = {
            1: "Taylor series hit its term cap",
            2: "no regime reached tolerance",
            3: "result is not finite",
        }.get(code, "unknown failure")
        raise NonConvergent(f"M({a}, {c}, .): {reason}")


def kummer_m(a, c=None, zeta=None):
    """Kummer's confluent hypergeometric function M(a, c, zeta).

    Accepts either a ``KummerArgs`` instance or three values. ``zeta`` may be
    an array, in which case an array of the same shape comes back.
    """
    if isinstance(a, KummerArgs):
        a, c, zeta = a.a, a.c, a.zeta
    a, c = _snap(complex(a), complex(c))
    if nonpositive_integer(c):
        raise PoleArgument(f"M(a, c, .) undefined for c = {c}")
    pre1, pre2, ap, cp = _dispatch_flags(a, c)
    if np.ndim(zeta) == 0:
        val, status = kernels.kummer_scalar(a, c, complex(zeta), pre1, pre2, ap, cp, CROSSOVER)
        _check_status(np.asarray(status), a, c)
        return val
    zarr = np.asarray(zeta, dtype=np.complex128)
    vals, status = kernels.kummer_array(a, c, zarr, pre1, pre2, ap, cp, CROSSOVER)
    _check_status(status, a, c)
    return vals.reshape(zarr.shape)


def kummer_m_prime(a, c=None, zeta=None):
    """d/dzeta M(a, c, zeta) = (a/c) M(a+1, c+1, zeta)."""
    if isinstance(a, KummerArgs):
        a, c, zeta = a.a, a.c, a.zeta
    a, c = _snap(complex(a), complex(c))
    if nonpositive_integer(c):
        raise PoleArgument(f"M(a, c, .) undefined for c = {c}")
    if a == 0:
        return 0j if np.ndim(zeta) == 0 else np.zeros(np.shape(zeta), dtype=np.complex128)
    return (a / c) * kummer_m(a + 1, c + 1, zeta)


def erf_c(z):
    """Complex error function through erf(z) = 2z/sqrt(pi) M(1/2, 3/2, -z^2)."""
    z = np.asarray(z, dtype=np.complex128) if np.ndim(z) else complex(z)
    return 2.0 * z / _SQRT_PI * kummer_m(0.5, 1.5, -z * z)


def erfi_c(z):
    """Imaginary error function, erfi(z) = -i erf(iz)."""
    z = np.asarray(z, dtype=np.complex128) if np.ndim(z) else complex(z)
    return -1j * erf_c(1j * z)


__all__ = [
    "KummerArgs",
    "pochhammer",
    "kummer_m",
    "kummer_m_prime",
    "gamma_c",
    "rgamma",
    "erf_c",
    "erfi_c",
    "nonpositive_integer",
]
