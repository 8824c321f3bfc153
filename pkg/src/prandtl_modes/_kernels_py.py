"""Pure-Python mirror of the compiled Kummer kernels.

Same signatures, same stopping rules, same status codes. Used when the
extension is unavailable or when ``PRANDTL_MODES_PURE_PYTHON=1``.
"""

import cmath
import math

import numpy as np

STOP_RATIO = 1e-17
ASYM_TOL = 1e-14
ASYM_MAX_TERMS = 200
KAPPA_DD = 16.0
SPLITTER = 134217729.0

STATUS_OK = 0
STATUS_TAYLOR_CAP = 1
STATUS_ASYM_INACCURATE = 2
STATUS_NONFINITE = 3


def _taylor(a, c, z, max_terms):
    s = 1.0 + 0j
    comp = 0j
    t = 1.0 + 0j
    tmax = 1.0
    small = 0
    n = 0
    ok = False
    while n < max_terms:
        t = t * (a + n) / (c + n) * z / (n + 1)
        n += 1
        y = t - comp
        s_new = s + y
        comp = (s_new - s) - y
        s = s_new
        at = abs(t)
        tmax = max(tmax, at)
        if at <= STOP_RATIO * abs(s):
            small += 1
            if small >= 3:
                ok = True
                break
        else:
            small = 0
    kappa = tmax / abs(s) if abs(s) > 0.0 else 1e300
    return s, n, ok, kappa


# double-double helpers; pairs (hi, lo)

def _two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _quick_two_sum(a, b):
    s = a + b
    return s, b - (s - a)


def _two_prod(a, b):
    p = a * b
    t = SPLITTER * a
    ah = t - (t - a)
    al = a - ah
    t = SPLITTER * b
    bh = t - (t - b)
    bl = b - bh
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def _dd_add(x, y):
    s, e = _two_sum(x[0], y[0])
    t, f = _two_sum(x[1], y[1])
    e += t
    s, e = _quick_two_sum(s, e)
    e += f
    return _quick_two_sum(s, e)


def _dd_neg(x):
    return -x[0], -x[1]


def _dd_mul(x, y):
    p, e = _two_prod(x[0], y[0])
    e += x[0] * y[1] + x[1] * y[0]
    return _quick_two_sum(p, e)


def _dd_div(x, y):
    q1 = x[0] / y[0]
    r = _dd_add(x, _dd_neg(_dd_mul(y, (q1, 0.0))))
    q2 = r[0] / y[0]
    r = _dd_add(r, _dd_neg(_dd_mul(y, (q2, 0.0))))
    q3 = r[0] / y[0]
    return _dd_add(_quick_two_sum(q1, q2), (q3, 0.0))


def _cdd_mul(x, y):
    re = _dd_add(_dd_mul(x[0], y[0]), _dd_neg(_dd_mul(x[1], y[1])))
    im = _dd_add(_dd_mul(x[0], y[1]), _dd_mul(x[1], y[0]))
    return re, im


def _cdd_div(x, y):
    den = _dd_add(_dd_mul(y[0], y[0]), _dd_mul(y[1], y[1]))
    num = _cdd_mul(x, (y[0], _dd_neg(y[1])))
    return _dd_div(num[0], den), _dd_div(num[1], den)


def _taylor_dd(a, c, z, max_terms):
    s = ((1.0, 0.0), (0.0, 0.0))
    t = ((1.0, 0.0), (0.0, 0.0))
    zz = ((z.real, 0.0), (z.imag, 0.0))
    small = 0
    n = 0
    ok = False
    while n < max_terms:
        num = _cdd_mul((_two_sum(a.real, float(n)), (a.imag, 0.0)), zz)
        m = (float(n + 1), 0.0)
        den = (_dd_mul(_two_sum(c.real, float(n)), m), _dd_mul((c.imag, 0.0), m))
        t = _cdd_div(_cdd_mul(t, num), den)
        n += 1
        s = (_dd_add(s[0], t[0]), _dd_add(s[1], t[1]))
        if abs(complex(t[0][0], t[1][0])) <= STOP_RATIO * abs(complex(s[0][0], s[1][0])):
            small += 1
            if small >= 3:
                ok = True
                break
        else:
            small = 0
    return complex(s[0][0] + s[0][1], s[1][0] + s[1][1]), n, ok


def _asym_series(p, q, w):
    s = 1.0 + 0j
    comp = 0j
    t = 1.0 + 0j
    prev = 1.0
    k = 0
    while k < ASYM_MAX_TERMS:
        t_next = t * (p + k) * (q + k) / (k + 1) * w
        if abs(t_next) == 0.0:
            return s, 0.0, True
        if abs(t_next) > prev:
            return s, prev, True
        t = t_next
        k += 1
        y = t - comp
        s_new = s + y
        comp = (s_new - s) - y
        s = s_new
        prev = abs(t)
        if prev <= STOP_RATIO * abs(s):
            return s, prev, True
    return s, prev, False


def _asymptotic(a, c, z, pre1, pre2):
    logz = cmath.log(z)
    s1 = s2 = 0j
    part1 = part2 = 0j
    last1 = last2 = 0.0
    ok1 = ok2 = True
    if pre1 != 0:
        s1, last1, ok1 = _asym_series(1.0 - a, c - a, 1.0 / z)
        part1 = pre1 * cmath.exp(z + (a - c) * logz)
    if pre2 != 0:
        s2, last2, ok2 = _asym_series(a, a - c + 1.0, -1.0 / z)
        # e^{+-i pi a} switches across the Stokes line ph z = 0 (mean on the line);
        # taking the side from log z keeps a signed zero on the cut consistent
        if logz.imag > 0.0:
            phase = cmath.exp(1j * math.pi * a)
        elif logz.imag < 0.0:
            phase = cmath.exp(-1j * math.pi * a)
        else:
            phase = cmath.cos(math.pi * a)
        part2 = pre2 * phase * cmath.exp(-a * logz)
    total = part1 * s1 + part2 * s2
    scale = abs(total)
    relerr = 0.0 if scale == 0.0 else (abs(part1) * last1 + abs(part2) * last2) / scale
    if not (ok1 and ok2):
        relerr = 1.0
    return total, relerr


def _sum(a, c, z):
    val, n, ok, kappa = _taylor(a, c, z, 10000)
    if kappa > KAPPA_DD:
        val, n, ok = _taylor_dd(a, c, z, 10000)
    return val, ok


def _series(a, c, z):
    if z.real < 0.0:
        s, ok = _sum(c - a, c, -z)
        return cmath.exp(z) * s, ok
    return _sum(a, c, z)


def _kummer(a, c, z, pre1, pre2, a_poly, ca_poly, crossover):
    status = STATUS_OK
    try:
        if a_poly:
            val, ok = _sum(a, c, z)
        elif ca_poly:
            s, ok = _sum(c - a, c, -z)
            val = cmath.exp(z) * s
        elif abs(z) <= crossover:
            val, ok = _series(a, c, z)
        else:
            val, relerr = _asymptotic(a, c, z, pre1, pre2)
            ok = True
            if relerr > ASYM_TOL:
                val, ok = _series(a, c, z)
                if not ok:
                    status = STATUS_ASYM_INACCURATE
    except OverflowError:
        return complex(math.inf, 0.0), STATUS_NONFINITE
    if not ok and status == STATUS_OK:
        status = STATUS_TAYLOR_CAP
    if not abs(val) < 1e308:
        status = STATUS_NONFINITE
    return val, status


def taylor(a, c, z, max_terms=10000):
    """Compensated Taylor sum of M(a, c, z).

    Returns (value, terms used, converged, cancellation factor).
    """
    return _taylor(complex(a), complex(c), complex(z), int(max_terms))


def taylor_dd(a, c, z, max_terms=10000):
    """Taylor sum of M(a, c, z) in double-double; returns (value, terms, converged)."""
    return _taylor_dd(complex(a), complex(c), complex(z), int(max_terms))


def asymptotic(a, c, z, pre1, pre2):
    """Large-|z| expansion; returns (value, estimated relative truncation error)."""
    return _asymptotic(complex(a), complex(c), complex(z), complex(pre1), complex(pre2))


def kummer_scalar(a, c, z, pre1, pre2, a_poly, ca_poly, crossover):
    return _kummer(complex(a), complex(c), complex(z), complex(pre1), complex(pre2),
                   bool(a_poly), bool(ca_poly), float(crossover))


def kummer_array(a, c, z, pre1, pre2, a_poly, ca_poly, crossover):
    zz = np.ravel(np.asarray(z, dtype=np.complex128))
    out = np.empty(zz.shape[0], dtype=np.complex128)
    st = np.zeros(zz.shape[0], dtype=np.int32)
    a, c, pre1, pre2 = complex(a), complex(c), complex(pre1), complex(pre2)
    for i, zi in enumerate(zz):
        out[i], st[i] = _kummer(a, c, complex(zi), pre1, pre2,
                                bool(a_poly), bool(ca_poly), float(crossover))
    return out, st
