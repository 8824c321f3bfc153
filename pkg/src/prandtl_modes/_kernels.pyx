# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for Kummer's function M(a, c, z).

Kept deliberately small: the Taylor sum, the large-argument expansion and the
regime dispatch. Everything else (Gamma prefactors, parameter checks, error
mapping) lives in ``specfun``. ``_kernels_py`` mirrors this module line for line.
"""

import numpy as np
cimport numpy as cnp

cnp.import_array()

cdef extern from "complex.h" nogil:
    double complex cexp(double complex)
    double complex clog(double complex)
    double complex ccos(double complex)
    double cabs(double complex)
    double creal(double complex)
    double cimag(double complex)

cdef double STOP_RATIO = 1e-17
cdef double KAPPA_DD = 16.0
cdef double SPLITTER = 134217729.0
cdef double ASYM_TOL = 1e-14
cdef int ASYM_MAX_TERMS = 200

DEF PI = 3.141592653589793

# status codes shared with the pure-Python mirror
STATUS_OK = 0
STATUS_TAYLOR_CAP = 1
STATUS_ASYM_INACCURATE = 2
STATUS_NONFINITE = 3

# ---- double-double arithmetic (Dekker/Veltkamp, no fma so the Python mirror
# reproduces the same bits) ----

cdef struct dd:
    double hi
    double lo

cdef struct cdd:
    dd re
    dd im


cdef inline dd _two_sum(double a, double b) noexcept nogil:
    cdef dd r
    cdef double bb
    r.hi = a + b
    bb = r.hi - a
    r.lo = (a - (r.hi - bb)) + (b - bb)
    return r


cdef inline dd _quick_two_sum(double a, double b) noexcept nogil:
    cdef dd r
    r.hi = a + b
    r.lo = b - (r.hi - a)
    return r


cdef inline dd _two_prod(double a, double b) noexcept nogil:
    cdef dd r
    cdef double t, ah, al, bh, bl
    r.hi = a * b
    t = SPLITTER * a
    ah = t - (t - a)
    al = a - ah
    t = SPLITTER * b
    bh = t - (t - b)
    bl = b - bh
    r.lo = ((ah * bh - r.hi) + ah * bl + al * bh) + al * bl
    return r


cdef inline dd _dd_add(dd a, dd b) noexcept nogil:
    cdef dd s = _two_sum(a.hi, b.hi)
    cdef dd t = _two_sum(a.lo, b.lo)
    s.lo += t.hi
    s = _quick_two_sum(s.hi, s.lo)
    s.lo += t.lo
    return _quick_two_sum(s.hi, s.lo)


cdef inline dd _dd_neg(dd a) noexcept nogil:
    cdef dd r
    r.hi = -a.hi
    r.lo = -a.lo
    return r


cdef inline dd _dd_mul(dd a, dd b) noexcept nogil:
    cdef dd p = _two_prod(a.hi, b.hi)
    p.lo += a.hi * b.lo + a.lo * b.hi
    return _quick_two_sum(p.hi, p.lo)


cdef inline dd _dd_div(dd a, dd b) noexcept nogil:
    cdef double q1 = a.hi / b.hi
    cdef dd r = _dd_add(a, _dd_neg(_dd_mul(b, _dd_from(q1))))
    cdef double q2 = r.hi / b.hi
    r = _dd_add(r, _dd_neg(_dd_mul(b, _dd_from(q2))))
    cdef double q3 = r.hi / b.hi
    cdef dd q = _quick_two_sum(q1, q2)
    return _dd_add(q, _dd_from(q3))


cdef inline dd _dd_from(double a) noexcept nogil:
    cdef dd r
    r.hi = a
    r.lo = 0.0
    return r


cdef inline cdd _cdd_mul(cdd a, cdd b) noexcept nogil:
    cdef cdd r
    r.re = _dd_add(_dd_mul(a.re, b.re), _dd_neg(_dd_mul(a.im, b.im)))
    r.im = _dd_add(_dd_mul(a.re, b.im), _dd_mul(a.im, b.re))
    return r


cdef inline cdd _cdd_div(cdd a, cdd b) noexcept nogil:
    cdef dd den = _dd_add(_dd_mul(b.re, b.re), _dd_mul(b.im, b.im))
    cdef cdd conj_b
    conj_b.re = b.re
    conj_b.im = _dd_neg(b.im)
    cdef cdd num = _cdd_mul(a, conj_b)
    num.re = _dd_div(num.re, den)
    num.im = _dd_div(num.im, den)
    return num


cdef inline cdd _cdd_from(double complex z) noexcept nogil:
    cdef cdd r
    r.re = _dd_from(creal(z))
    r.im = _dd_from(cimag(z))
    return r


cdef double complex _taylor_dd(double complex a, double complex c, double complex z,
                               int max_terms, int* nterms, int* ok) noexcept nogil:
    # same series as _taylor, with terms generated and summed in double-double
    cdef cdd s, t, num, den, zz
    cdef dd nn
    cdef int small = 0
    cdef int n = 0
    cdef double ts, ss
    s = _cdd_from(1.0)
    t = _cdd_from(1.0)
    zz = _cdd_from(z)
    ok[0] = 0
    while n < max_terms:
        num.re = _two_sum(creal(a), <double>n)
        num.im = _dd_from(cimag(a))
        num = _cdd_mul(num, zz)
        den.re = _dd_mul(_two_sum(creal(c), <double>n), _dd_from(<double>(n + 1)))
        den.im = _dd_mul(_dd_from(cimag(c)), _dd_from(<double>(n + 1)))
        t = _cdd_div(_cdd_mul(t, num), den)
        n += 1
        s.re = _dd_add(s.re, t.re)
        s.im = _dd_add(s.im, t.im)
        ts = cabs(t.re.hi + 1j * t.im.hi)
        ss = cabs(s.re.hi + 1j * s.im.hi)
        if ts <= STOP_RATIO * ss:
            small += 1
            if small >= 3:
                ok[0] = 1
                break
        else:
            small = 0
    nterms[0] = n
    return (s.re.hi + s.re.lo) + 1j * (s.im.hi + s.im.lo)


cdef double complex _taylor(double complex a, double complex c, double complex z,
                            int max_terms, int* nterms, int* ok,
                            double* kappa) noexcept nogil:
    # kappa reports max|term| / |sum|, the cancellation amplification factor
    cdef double complex s = 1.0
    cdef double complex comp = 0.0
    cdef double complex t = 1.0
    cdef double complex y, s_new
    cdef double tmax = 1.0
    cdef double at
    cdef int small = 0
    cdef int n = 0
    ok[0] = 0
    while n < max_terms:
        t = t * (a + n) / (c + n) * z / (n + 1)
        n += 1
        y = t - comp
        s_new = s + y
        comp = (s_new - s) - y
        s = s_new
        at = cabs(t)
        if at > tmax:
            tmax = at
        if at <= STOP_RATIO * cabs(s):
            small += 1
            if small >= 3:
                ok[0] = 1
                break
        else:
            small = 0
    nterms[0] = n
    if cabs(s) > 0.0:
        kappa[0] = tmax / cabs(s)
    else:
        kappa[0] = 1e300
    return s


cdef double complex _series(double complex a, double complex c, double complex z,
                            int* ok) noexcept nogil:
    # Taylor sum, redone in double-double when cancellation would cost digits
    cdef int nterms = 0
    cdef double kappa = 0.0
    cdef double complex val = _taylor(a, c, z, 10000, &nterms, ok, &kappa)
    if kappa > KAPPA_DD:
        val = _taylor_dd(a, c, z, 10000, &nterms, ok)
    return val


cdef double complex _asym_series(double complex p, double complex q, double complex w,
                                 double* last, int* ok) noexcept nogil:
    # sum_s (p)_s (q)_s / s! * w^s with optimal truncation
    cdef double complex s = 1.0
    cdef double complex comp = 0.0
    cdef double complex t = 1.0
    cdef double complex t_next, y, s_new
    cdef double prev = 1.0
    cdef int k = 0
    ok[0] = 0
    last[0] = 1.0
    while k < ASYM_MAX_TERMS:
        t_next = t * (p + k) * (q + k) / (k + 1) * w
        if cabs(t_next) == 0.0:
            last[0] = 0.0
            ok[0] = 1
            return s
        if cabs(t_next) > prev:
            # terms started growing: stop at the smallest one
            last[0] = prev
            ok[0] = 1
            return s
        t = t_next
        k += 1
        y = t - comp
        s_new = s + y
        comp = (s_new - s) - y
        s = s_new
        prev = cabs(t)
        if prev <= STOP_RATIO * cabs(s):
            last[0] = prev
            ok[0] = 1
            return s
    last[0] = prev
    return s


cdef double complex _asymptotic(double complex a, double complex c, double complex z,
                                double complex pre1, double complex pre2,
                                double* relerr) noexcept nogil:
    cdef double last1 = 0.0, last2 = 0.0
    cdef int ok1 = 1, ok2 = 1
    cdef double complex logz = clog(z)
    cdef double complex s1 = 0.0, s2 = 0.0
    cdef double complex part1 = 0.0, part2 = 0.0
    cdef double complex phase
    cdef double complex total
    cdef double scale
    if pre1 != 0.0:
        s1 = _asym_series(1.0 - a, c - a, 1.0 / z, &last1, &ok1)
        part1 = pre1 * cexp(z + (a - c) * logz)
    if pre2 != 0.0:
        s2 = _asym_series(a, a - c + 1.0, -1.0 / z, &last2, &ok2)
        # e^{+-i pi a} switches across the Stokes line ph z = 0 (mean on the line);
        # taking the side from log z keeps a signed zero on the cut consistent
        if cimag(logz) > 0.0:
            phase = cexp(1j * PI * a)
        elif cimag(logz) < 0.0:
            phase = cexp(-1j * PI * a)
        else:
            phase = ccos(PI * a)
        part2 = pre2 * phase * cexp(-a * logz)
    total = part1 * s1 + part2 * s2
    scale = cabs(total)
    if scale == 0.0:
        relerr[0] = 0.0
    else:
        relerr[0] = (cabs(part1) * last1 + cabs(part2) * last2) / scale
    if not ok1 or not ok2:
        relerr[0] = 1.0
    return total


cdef double complex _kummer(double complex a, double complex c, double complex z,
                            double complex pre1, double complex pre2,
                            int a_poly, int ca_poly, double crossover,
                            int* status) noexcept nogil:
    cdef int ok = 0
    cdef double relerr = 0.0
    cdef double complex val
    status[0] = 0
    if a_poly:
        val = _series(a, c, z, &ok)
    elif ca_poly:
        val = cexp(z) * _series(c - a, c, -z, &ok)
    elif cabs(z) <= crossover:
        if creal(z) < 0.0:
            val = cexp(z) * _series(c - a, c, -z, &ok)
        else:
            val = _series(a, c, z, &ok)
    else:
        val = _asymptotic(a, c, z, pre1, pre2, &relerr)
        ok = 1
        if relerr > ASYM_TOL:
            # expansion too coarse here: fall back to the series
            if creal(z) < 0.0:
                val = cexp(z) * _series(c - a, c, -z, &ok)
            else:
                val = _series(a, c, z, &ok)
            if not ok:
                status[0] = 2
    if not ok and status[0] == 0:
        status[0] = 1
    if not (cabs(val) < 1e308):
        status[0] = 3
    return val


def taylor(double complex a, double complex c, double complex z, int max_terms=10000):
    """Compensated Taylor sum of M(a, c, z).

    Returns (value, terms used, converged, cancellation factor).
    """
    cdef int nterms = 0, ok = 0
    cdef double kappa = 0.0
    cdef double complex val = _taylor(a, c, z, max_terms, &nterms, &ok, &kappa)
    return complex(val), nterms, bool(ok), kappa


def taylor_dd(double complex a, double complex c, double complex z, int max_terms=10000):
    """Taylor sum of M(a, c, z) in double-double; returns (value, terms, converged)."""
    cdef int nterms = 0, ok = 0
    cdef double complex val = _taylor_dd(a, c, z, max_terms, &nterms, &ok)
    return complex(val), nterms, bool(ok)


def asymptotic(double complex a, double complex c, double complex z,
               double complex pre1, double complex pre2):
    """Large-|z| expansion; ``pre1 = G(c)/G(a)``, ``pre2 = G(c)/G(c-a)``.

    Returns (value, estimated relative truncation error).
    """
    cdef double relerr = 0.0
    cdef double complex val = _asymptotic(a, c, z, pre1, pre2, &relerr)
    return complex(val), relerr


def kummer_scalar(double complex a, double complex c, double complex z,
                  double complex pre1, double complex pre2,
                  bint a_poly, bint ca_poly, double crossover):
    cdef int status = 0
    cdef double complex val = _kummer(a, c, z, pre1, pre2, a_poly, ca_poly,
                                      crossover, &status)
    return complex(val), status


def kummer_array(double complex a, double complex c, z,
                 double complex pre1, double complex pre2,
                 bint a_poly, bint ca_poly, double crossover):
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] zz = np.ascontiguousarray(
        np.ravel(z), dtype=np.complex128)
    cdef Py_ssize_t n = zz.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] out = np.empty(n, dtype=np.complex128)
    cdef cnp.ndarray[cnp.int32_t, ndim=1] st = np.zeros(n, dtype=np.int32)
    cdef double complex[::1] zv = zz
    cdef double complex[::1] ov = out
    cdef int[::1] sv = st
    cdef Py_ssize_t i
    cdef int s = 0
    cdef int ap = a_poly, cp = ca_poly
    with nogil:
        for i in range(n):
            ov[i] = _kummer(a, c, zv[i], pre1, pre2, ap, cp, crossover, &s)
            sv[i] = s
    return out, st
