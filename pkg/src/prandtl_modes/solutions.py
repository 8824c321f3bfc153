"""Closed-form solution families.

Everything here is a direct evaluator built on ``specfun``: the meromorphic
pair X (z frame) and Y (eta frame), the entire series R, the criterion pair
(tau, W), the oscillator functions psi, the kernel function g used at mu = 1,
the semi-explicit solutions for negative odd mu, and ladder operators.
"""

from __future__ import annotations

import cmath
import math
import threading
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import SingularPoint
from .quadrature import cauchy_derivative, integrate_segments
from .specfun import erf_c, erfi_c, kummer_m, kummer_m_prime

SINGULAR_GUARD = 1e-10
R_MAX_TERMS = 200
R_STOP = 1e-17

E7 = cmath.exp(7j * math.pi / 4)
E3 = cmath.exp(3j * math.pi / 4)
SQRT_PI = math.sqrt(math.pi)


def _prep(x):
    """Return (complex array, was_scalar)."""
    if np.ndim(x) == 0:
        return np.asarray([complex(x)]), True
    return np.asarray(x, dtype=np.complex128), False


def _out(v, scalar):
    return complex(v.ravel()[0]) if scalar else v


def _check_branch(branch):
    if branch not in (1, 2):
        raise ValueError(f"branch must be 1 or 2, got {branch!r}")


# ---------------------------------------------------------------- X and Y

@dataclass(frozen=True)
class TauConstants:
    """The four Kummer parameters attached to tau."""

    a_tau: complex
    b_tau: complex
    c_tau: complex
    d_tau: complex

    @classmethod
    def from_tau(cls, tau):
        t = complex(tau) * E7
        return cls(-(1 + t) / 4, (3 - t) / 4, (1 - t) / 4, (5 - t) / 4)


def _guard(q, what):
    if np.any(np.abs(q) <= SINGULAR_GUARD):
        raise SingularPoint(f"{what} too close to a pole")


def x_tau(tau, branch, z):
    """X_{tau,1} (even) or X_{tau,2} (odd), meromorphic with poles at z^2 = tau."""
    _check_branch(branch)
    tau = complex(tau)
    zz, scalar = _prep(z)
    den = tau - zz * zz
    _guard(den, "z^2 - tau")
    k = TauConstants.from_tau(tau)
    arg = E7 * zz * zz
    pre = np.exp(0.5 * E3 * zz * zz) / den ** 2
    if branch == 1:
        val = pre * (tau * kummer_m(k.a_tau, 0.5, arg)
                     - 4 * k.a_tau * zz * zz * kummer_m(k.b_tau, 1.5, arg))
    else:
        val = zz * pre * (kummer_m(k.c_tau, 1.5, arg)
                          + E7 * zz * zz / 3 * kummer_m(k.d_tau, 2.5, arg))
    return _out(val, scalar)


def y_mu(mu, branch, eta):
    """Y_{mu,1} (even) or Y_{mu,2} (odd), meromorphic with poles at eta^2 = mu."""
    _check_branch(branch)
    mu = complex(mu)
    ee, scalar = _prep(eta)
    den = mu - ee * ee
    _guard(den, "eta^2 - mu")
    e2 = ee * ee
    pre = np.exp(-0.5 * e2) / den ** 2
    if branch == 1:
        val = pre * (mu * kummer_m(-(mu + 1) / 4, 0.5, e2)
                     + (mu + 1) * e2 * kummer_m((3 - mu) / 4, 1.5, e2))
    else:
        val = ee * pre * (kummer_m((1 - mu) / 4, 1.5, e2)
                          + e2 / 3 * kummer_m((5 - mu) / 4, 2.5, e2))
    return _out(val, scalar)


# X(z) and Y(eta) solve the same equation after eta = e^{-i pi/8} z, but the
# normalisations differ by these constant factors.
X_OVER_Y = (cmath.exp(-1j * math.pi / 4), cmath.exp(-3j * math.pi / 8))


def x_from_y(tau, branch, z):
    """X_{tau,i}(z) recomputed through Y_{mu,i}(e^{-i pi/8} z), mu = tau e^{-i pi/4}."""
    mu = complex(tau) * cmath.exp(-1j * math.pi / 4)
    zz, scalar = _prep(z)
    return _out(X_OVER_Y[branch - 1] * y_mu(mu, branch, ROT * zz), scalar)


# ---------------------------------------------------------------- R series

@dataclass(frozen=True)
class SeriesCoeffs:
    mu: complex
    a: tuple
    b: tuple


def series_coeffs(mu, n_max):
    """Coefficients a_0..a_{n_max}, b_0..b_{n_max} of the even/odd R series.

    Running products keep n! and the Pochhammer symbols from overflowing.
    """
    mu = complex(mu)
    alpha = -(mu + 1) / 4
    beta = (5 - mu) / 4
    a, b = [], []
    p = 1.0 + 0j  # (alpha)_n / ((1/2)_n n!)
    q = 0j        # (beta)_{n-1} / ((3/2)_n n!)
    for n in range(n_max + 1):
        a.append((mu - 2 * n) * p)
        p *= (alpha + n) / ((0.5 + n) * (n + 1))
        if n == 0:
            b.append(1.0 + 0j)
            q = 1.0 / 1.5
        else:
            b.append(0.25 * (2 * n + 1 - mu) * q)
            q *= (beta + n - 1) / ((1.5 + n) * (n + 1))
    return SeriesCoeffs(mu, tuple(a), tuple(b))


def series_coeff(mu, kind, n):
    """Single coefficient a_n (kind 'a') or b_n (kind 'b')."""
    if kind not in ("a", "b"):
        raise ValueError("kind must be 'a' or 'b'")
    if n < 0 or int(n) != n:
        raise ValueError("n must be a nonnegative integer")
    c = series_coeffs(mu, int(n))
    return (c.a if kind == "a" else c.b)[int(n)]


def r_series(mu, branch, eta, max_terms=R_MAX_TERMS):
    """Truncated R_{mu,1} (even) or R_{mu,2} (odd) power series."""
    _check_branch(branch)
    ee, scalar = _prep(eta)
    coeffs = series_coeffs(mu, max_terms)
    cs = coeffs.a if branch == 1 else coeffs.b
    e2 = ee * ee
    s = np.zeros_like(ee)
    comp = np.zeros_like(ee)
    power = np.ones_like(ee) if branch == 1 else ee.copy()
    small = 0
    for c in cs:
        t = c * power
        y = t - comp
        s_new = s + y
        comp = (s_new - s) - y
        s = s_new
        if np.all(np.abs(t) <= R_STOP * np.abs(s)):
            small += 1
            if small >= 3:
                break
        else:
            small = 0
        power = power * e2
    return _out(s, scalar)


def y_from_series(mu, branch, eta):
    """Y_{mu,i} through the R series instead of Kummer functions."""
    ee, scalar = _prep(eta)
    den = complex(mu) - ee * ee
    _guard(den, "eta^2 - mu")
    return _out(np.exp(-0.5 * ee * ee) / den ** 2 * r_series(mu, branch, ee), scalar)


# ---------------------------------------------------------------- criterion

ROT = cmath.exp(-1j * math.pi / 8)
# W' = C1_CRITERION * X_{tau,1} at tau = e^{5 pi i/4}; the sign is fixed by W itself
C1_CRITERION = -cmath.exp(1j * math.pi / 8) * math.sqrt(2 / math.pi)


def tau_criterion():
    """The unique tau with negative imaginary part, e^{5 pi i/4}."""
    return cmath.exp(5j * math.pi / 4)


def w_criterion(z):
    """W(z) = (1 + erf(eta/sqrt 2) + sqrt(2/pi) eta e^{-eta^2/2} / (1 + eta^2)) / 2."""
    zz, scalar = _prep(z)
    eta = ROT * zz
    den = 1 + eta * eta
    _guard(den, "1 + eta^2")
    val = 0.5 * (1 + erf_c(eta / math.sqrt(2))
                 + math.sqrt(2 / math.pi) * eta * np.exp(-0.5 * eta * eta) / den)
    return _out(val, scalar)


def w_criterion_prime(z):
    """W'(z) = C1_CRITERION e^{3 pi i/4} e^{-eta^2/2} / (1 + eta^2)^2."""
    zz, scalar = _prep(z)
    eta = ROT * zz
    den = 1 + eta * eta
    _guard(den, "1 + eta^2")
    return _out(C1_CRITERION * E3 * np.exp(-0.5 * eta * eta) / den ** 2, scalar)


# ---------------------------------------------------------------- oscillator

def psi_mu(mu, branch, eta):
    """Even (branch 1) or odd (branch 2) solution of -psi'' + eta^2 psi = (mu+2) psi."""
    _check_branch(branch)
    mu = complex(mu)
    ee, scalar = _prep(eta)
    e2 = ee * ee
    g = np.exp(-0.5 * e2)
    if branch == 1:
        val = kummer_m(-(1 + mu) / 4, 0.5, e2) * g
    else:
        val = ee * kummer_m((1 - mu) / 4, 1.5, e2) * g
    return _out(val, scalar)


def psi_mu_prime(mu, branch, eta):
    """Derivative of :func:`psi_mu` via the Kummer derivative identity."""
    _check_branch(branch)
    mu = complex(mu)
    ee, scalar = _prep(eta)
    e2 = ee * ee
    g = np.exp(-0.5 * e2)
    if branch == 1:
        a = -(1 + mu) / 4
        val = (2 * ee * kummer_m_prime(a, 0.5, e2) - ee * kummer_m(a, 0.5, e2)) * g
    else:
        a = (1 - mu) / 4
        m = kummer_m(a, 1.5, e2)
        val = (m + 2 * e2 * kummer_m_prime(a, 1.5, e2) - e2 * m) * g
    return _out(val, scalar)


def g_mu1(eta):
    """e^{eta^2/2} erf(eta), the replacement kernel function at mu = 1."""
    ee, scalar = _prep(eta)
    return _out(np.exp(0.5 * ee * ee) * erf_c(ee), scalar)


def g_mu1_prime(eta):
    ee, scalar = _prep(eta)
    val = ee * np.exp(0.5 * ee * ee) * erf_c(ee) + 2 / SQRT_PI * np.exp(-0.5 * ee * ee)
    return _out(val, scalar)


# ------------------------------------------------- negative odd mu = -(2m+3)

def _ceil_half(n):
    return -((-n) // 2)


def _poly_deriv(p):
    return [k * p[k] for k in range(1, len(p))] or [Fraction(0)]


def _poly_add(p, q):
    n = max(len(p), len(q))
    return [(p[k] if k < len(p) else 0) + (q[k] if k < len(q) else 0) for k in range(n)]


def _poly_two_eta(p):
    return [Fraction(0)] + [2 * c for c in p]


@dataclass(frozen=True)
class NegOddPolynomials:
    """Exact coefficients (lowest degree first) for mu = -(2m+3)."""

    m: int
    p: tuple
    q: tuple
    q_tilde: tuple
    i: int
    j: int


def _build_neg_odd(m):
    p = [Fraction(1)]
    q, qt = [Fraction(1)], [Fraction(0)]
    for _ in range(m):
        p = _poly_add(_poly_two_eta(p), _poly_deriv(p))
        q, qt = _poly_add(_poly_two_eta(q), _poly_deriv(q)), _poly_add(_poly_deriv(qt), q)
    ci = _ceil_half(m)
    cj = _ceil_half(m - 1)
    fi = Fraction(math.factorial(ci), math.factorial(2 * ci))
    fj = Fraction(1, math.factorial(cj) * 4 ** cj)
    i = (3 + (-1) ** (m + 1)) // 2
    j = (3 + (-1) ** m) // 2
    return NegOddPolynomials(
        m,
        tuple(fi * c for c in p),
        tuple(fj * c for c in q),
        tuple(fj * c for c in qt),
        i,
        j,
    )


_NEG_ODD_CACHE: dict[int, NegOddPolynomials] = {}
_NEG_ODD_LOCK = threading.Lock()


def neg_odd_polynomials(m):
    """Polynomials p_m, q_m, q~ of the semi-explicit solutions at mu = -(2m+3)."""
    if m < 0 or int(m) != m:
        raise ValueError("m must be a nonnegative integer")
    m = int(m)
    hit = _NEG_ODD_CACHE.get(m)
    if hit is not None:
        return hit
    with _NEG_ODD_LOCK:
        if m not in _NEG_ODD_CACHE:
            _NEG_ODD_CACHE[m] = _build_neg_odd(m)
        return _NEG_ODD_CACHE[m]


def _polyval(coeffs, x):
    out = np.zeros_like(x)
    for c in reversed(coeffs):
        out = out * x + float(c)
    return out


def psi_neg_odd(m, branch, eta):
    """Semi-explicit oscillator solutions at mu = -(2m+3).

    Branch ``'i'`` is p_m e^{eta^2/2}; branch ``'j'`` is
    q_m e^{eta^2/2} int_0^eta e^{-x^2} dx + q~ e^{-eta^2/2}. Each coincides with
    ``psi_mu(-(2m+3), k, .)`` for k the index returned in the polynomial record.
    """
    if branch not in ("i", "j"):
        raise ValueError("branch must be 'i' or 'j'")
    polys = neg_odd_polynomials(m)
    ee, scalar = _prep(eta)
    e2 = ee * ee
    if branch == "i":
        val = _polyval(polys.p, ee) * np.exp(0.5 * e2)
    else:
        integral = 0.5 * SQRT_PI * erf_c(ee)
        val = (_polyval(polys.q, ee) * np.exp(0.5 * e2) * integral
               + _polyval(polys.q_tilde, ee) * np.exp(-0.5 * e2))
    return _out(val, scalar)


def leading_coefficient_formula(m, branch):
    """Closed-form leading coefficient of p_m ('i') or q_m ('j')."""
    if branch == "i":
        c = _ceil_half(m)
        return Fraction(2 ** m * math.factorial(c), math.factorial(2 * c))
    c = _ceil_half(m - 1)
    return Fraction(2 ** m, math.factorial(c) * 4 ** c)


# ---------------------------------------------------------------- ladders

def ladder(direction, f, eta, radius=None, singularities=None):
    """A_up f = eta f - f' or A_down f = eta f + f', derivative by Cauchy integral."""
    if direction not in ("up", "down"):
        raise ValueError("direction must be 'up' or 'down'")
    ee, scalar = _prep(eta)
    fv = np.asarray(f(ee), dtype=np.complex128)
    d = cauchy_derivative(f, ee, 1, radius=radius, singularities=singularities)
    sign = -1 if direction == "up" else 1
    return _out(ee * fv + sign * d, scalar)


# ---------------------------------------------------------------- mu = -1

def _erfi_gauss(xi):
    v = erfi_c(xi) * np.exp(-0.5 * xi * xi)
    return np.stack([v, xi * xi * v], axis=-1)


def upsilon_m1_explicit(branch, eta, rel_tol=1e-12, abs_tol=1e-14):
    """Closed forms of the two Upsilon functions at mu = -1, starting point 0.

    Branch 2 still needs two integrals of erfi(x) e^{-x^2/2}, done by quadrature.
    """
    _check_branch(branch)
    ee, scalar = _prep(eta)
    if branch == 1:
        val = 0.5 * (ee * np.exp(-0.5 * ee * ee)
                     + (1 + ee * ee) * math.sqrt(math.pi / 2) * erf_c(ee / math.sqrt(2)))
        return _out(val, scalar)
    ints = integrate_segments(_erfi_gauss, np.zeros_like(ee), ee, rel_tol, abs_tol)
    val = (0.5 * SQRT_PI * (1 + 0.5 * ee * ee) * ints[:, 0]
           - 0.25 * SQRT_PI * ints[:, 1] - 0.5)
    return _out(val, scalar)


__all__ = [
    "TauConstants",
    "x_tau",
    "y_mu",
    "x_from_y",
    "X_OVER_Y",
    "SeriesCoeffs",
    "series_coeffs",
    "series_coeff",
    "r_series",
    "y_from_series",
    "tau_criterion",
    "w_criterion",
    "w_criterion_prime",
    "C1_CRITERION",
    "psi_mu",
    "psi_mu_prime",
    "g_mu1",
    "g_mu1_prime",
    "NegOddPolynomials",
    "neg_odd_polynomials",
    "psi_neg_odd",
    "leading_coefficient_formula",
    "ladder",
    "upsilon_m1_explicit",
]
