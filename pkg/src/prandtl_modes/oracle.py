"""Brute-force verification: recurrences, equation residuals, cross-checks.

Everything here is built from the special functions and the contour
quadrature only. Derivatives come from Cauchy integrals; a residual is the
modulus of the summed equation divided by the largest individual term.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import asymptotics as asy
from .frames import ModeSpec, ShearFlow, build_frame
from .modes import CoefficientTriple, UpsilonBasis, stream_function, stream_function_prime
from .quadrature import cauchy_derivative, cauchy_derivative_high
from .solutions import (
    psi_mu,
    tau_criterion,
    w_criterion,
    x_tau,
    y_mu,
)
from .specfun import kummer_m

SEED = 0x5EED
MIN_CLEARANCE = 0.3
ODE_TOL = 1e-8
RECURRENCE_TOL = 1e-12
SERIES_TOL = 1e-10
BOUNDARY_TOL = 1e-10
RECURRENCE_MUS = (-1, 2 + 1j, cmath.exp(1j * math.pi / 4), -5, 1 + 1j, 1 - 1j)
# poles of the criterion W: 1 + eta^2 = 0 with eta = e^{-i pi/8} z
W_POLES = (1j * cmath.exp(1j * math.pi / 8), -1j * cmath.exp(1j * math.pi / 8))


@dataclass
class ResidualReport:
    equation: str
    points: list
    max_rel_residual: float
    scale: float
    threshold: float | None = None
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.max_rel_residual >= 0:
            raise ValueError("residual must be a nonnegative number")

    @property
    def passed(self):
        return self.threshold is None or self.max_rel_residual < self.threshold

    def to_dict(self):
        return {
            "equation": self.equation,
            "points": [[complex(p).real, complex(p).imag] for p in self.points],
            "max_rel_residual": self.max_rel_residual,
            "scale": self.scale,
            "threshold": self.threshold,
            "passed": self.passed,
            "details": self.details,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)


def _relative(terms):
    """|sum| / max|term| column-wise, 0 where every term vanishes."""
    terms = np.asarray(terms, dtype=np.complex128)
    total = np.abs(terms.sum(axis=0))
    big = np.abs(terms).max(axis=0)
    rel = np.where(big > 0, total / np.where(big > 0, big, 1.0), 0.0)
    return rel, big


# ---------------------------------------------------------------- recurrences

def _scaled_coefficients(mu, n_max):
    """n! a_n and n! b_n from the closed forms; no factorial over/underflow."""
    alpha = -(mu + 1) / 4
    beta = (5 - mu) / 4
    a_hat, b_hat = [], [1 + 0j]
    p = 1 + 0j          # (alpha)_n / (1/2)_n
    q = 1 / 1.5 + 0j    # (beta)_{n-1} / (3/2)_n for n >= 1
    for n in range(n_max + 1):
        a_hat.append((mu - 2 * n) * p)
        p *= (alpha + n) / (0.5 + n)
        if n >= 1:
            b_hat.append(0.25 * (2 * n + 1 - mu) * q)
            q *= (beta + n - 1) / (1.5 + n)
    return a_hat, b_hat


def recurrence_terms(mu, N):
    """Terms of both three-term recurrences for n = 0..N, after multiplying by n!."""
    mu = complex(mu)
    a, b = _scaled_coefficients(mu, N + 1)
    ta, tb = [], []
    for n in range(N + 1):
        am1 = a[n - 1] * n if n else 0
        bm1 = b[n - 1] * n if n else 0
        ta.append([
            2 * mu * (2 * n * n + 3 * n + 1) * a[n + 1] / (n + 1),
            -(4 * n * n + (4 * mu - 6) * n - mu * mu + mu + 2) * a[n],
            (4 * n - 5 - mu) * am1,
        ])
        tb.append([
            2 * mu * (2 * n * n + 5 * n + 3) * b[n + 1] / (n + 1),
            -(4 * n * n + (4 * mu - 2) * n - mu * mu + 3 * mu) * b[n],
            (4 * n - 3 - mu) * bm1,
        ])
    return np.array(ta).T, np.array(tb).T


def check_recurrences(mu, N=200):
    """Closed-form coefficients substituted into both recurrences, n <= N."""
    if N < 2:
        raise ValueError("N must be at least 2")
    ta, tb = recurrence_terms(mu, N)
    ra, sa = _relative(ta)
    rb, sb = _relative(tb)
    worst = float(max(ra.max(), rb.max()))
    return ResidualReport(
        "recurrences", [complex(mu)], worst, float(max(sa.max(), sb.max())), RECURRENCE_TOL,
        {"even": float(ra.max()), "odd": float(rb.max()),
         "first_even": float(ra[0]), "first_odd": float(rb[0]), "N": N},
    )


# ---------------------------------------------------------------- residuals

def _terms_W(p, z, d):
    tau, s = p["tau"], p.get("sign", 1)
    q = tau - s * z * z
    return [q * q * d[1], 1j * q * d[3], -6j * s * z * d[2], -6j * s * d[1]]


def _terms_X(p, z, d):
    tau, s = p["tau"], p.get("sign", 1)
    q = tau - s * z * z
    return [1j * q * d[2], -6j * s * z * d[1], q * q * d[0], -6j * s * d[0]]


def _terms_F(p, z, d):
    tau, s = p["tau"], p.get("sign", 1)
    return [(tau - s * z * z) * d[1], 2 * s * z * d[0], 1j * d[3]]


def _terms_upsilon(p, e, d):
    mu = p["mu"]
    return [-d[3], (e * e - mu) * d[1], -2 * e * d[0]]


def _terms_Y(p, e, d):
    q = p["mu"] - e * e
    return [q * d[2], -6 * e * d[1], q * q * d[0], -6 * d[0]]


def _terms_R(p, e, d):
    mu = p["mu"]
    return [(mu - e * e) * d[2], -2 * e * (mu - 1 - e * e) * d[1],
            (mu + 1) * (mu - 2 - e * e) * d[0]]


def _terms_schrodinger(p, e, d):
    return [-d[2], e * e * d[0], -(p["mu"] + 2) * d[0]]


def _terms_bsquared(p, e, d):
    q = e * e - p["mu"]
    return [d[4], -2 * q * d[2], -4 * e * d[1], q * q * d[0], -6 * d[0]]


def _terms_ladder(p, e, d):
    # g = e f -/+ f' solves the oscillator at mu +/- 2 (up/down)
    s = -1 if p["direction"] == "up" else 1
    target = p["mu"] + (2 if p["direction"] == "up" else -2)
    g = e * d[0] + s * d[1]
    g2 = 2 * d[1] + e * d[2] + s * d[3]
    return [-g2, e * e * g, -(target + 2) * g]


EQUATIONS = {
    "W_ode": (_terms_W, 3),
    "X_ode": (_terms_X, 2),
    "F_ode": (_terms_F, 3),
    "Upsilon_ode": (_terms_upsilon, 3),
    "Y_ode": (_terms_Y, 2),
    "R_ode": (_terms_R, 2),
    "Schrodinger": (_terms_schrodinger, 2),
    "Bsquared": (_terms_bsquared, 4),
    "ladder": (_terms_ladder, 3),
}


def derivatives(f, points, max_order, radius=None, singularities=None, local=None):
    """[f, f', ..., f^(max_order)] at ``points`` from Cauchy integrals.

    ``local(center)`` may supply an evaluator tuned to one circle (for example
    an Upsilon integral anchored at the center); it is used point by point.
    """
    pts = np.atleast_1d(np.asarray(points, dtype=np.complex128))
    out = [np.asarray(f(pts), dtype=np.complex128)]
    for k in range(1, max_order + 1):
        op = cauchy_derivative if k <= 3 else cauchy_derivative_high
        if local is None:
            out.append(op(f, pts, k, radius=radius, singularities=singularities))
        else:
            out.append(np.array([
                op(local(c), c, k, radius=radius, singularities=singularities) for c in pts
            ]))
    return out


def residual(equation, f, params=None, points=(), radius=None, singularities=None,
             local=None, threshold=ODE_TOL):
    """Relative residual of ``equation`` for the evaluator ``f`` at ``points``."""
    if equation not in EQUATIONS:
        raise ValueError(f"unknown equation {equation!r}")
    params = dict(params or {})
    pts = np.atleast_1d(np.asarray(points, dtype=np.complex128))
    if singularities is not None and len(singularities):
        s = np.asarray(list(singularities), dtype=np.complex128)
        if np.min(np.abs(pts[:, None] - s[None, :])) < MIN_CLEARANCE:
            raise ValueError("points must stay 0.3 away from the declared singularities")
    terms_fn, order = EQUATIONS[equation]
    d = derivatives(f, pts, order, radius, singularities, local)
    rel, big = _relative(terms_fn(params, pts, d))
    return ResidualReport(equation, list(pts), float(rel.max()), float(big.max()), threshold)


# ---------------------------------------------------------------- factorisation

def apply_B(mu, f, radius=None):
    """Evaluator for B_mu f = -f'' + (eta^2 - mu) f (Cauchy second derivative)."""
    mu = complex(mu)

    def g(w):
        w = np.atleast_1d(np.asarray(w, dtype=np.complex128))
        return -cauchy_derivative(f, w, 2, radius=radius, rel_tol=1e-10) \
            + (w * w - mu) * np.asarray(f(w))

    return g


def factorisation_residual(mu, f, points):
    """B_mu^2 f against B_{mu-2} B_{mu+2} f + 4 f, both by nested Cauchy integrals."""
    pts = np.atleast_1d(np.asarray(points, dtype=np.complex128))
    lhs = apply_B(mu, apply_B(mu, f, 0.25), 0.5)(pts)
    rhs = apply_B(mu - 2, apply_B(mu + 2, f, 0.25), 0.5)(pts)
    four = 4 * np.asarray(f(pts))
    rel, big = _relative([lhs, -rhs, -four])
    return ResidualReport("factorisation", list(pts), float(rel.max()), float(big.max()), ODE_TOL)


# ---------------------------------------------------------------- series vs compact

def r_compact(mu, branch, eta):
    """R_{mu,i} written with Kummer functions (no pole, entire in eta)."""
    mu = complex(mu)
    e = np.asarray(eta, dtype=np.complex128)
    e2 = e * e
    if branch == 1:
        return mu * kummer_m(-(mu + 1) / 4, 0.5, e2) + (mu + 1) * e2 * kummer_m((3 - mu) / 4, 1.5, e2)
    return e * (kummer_m((1 - mu) / 4, 1.5, e2) + e2 / 3 * kummer_m((5 - mu) / 4, 2.5, e2))


def series_equivalence(mu, branch, eta_points):
    """Truncated power series against the Kummer compact form."""
    from .solutions import r_series

    pts = np.atleast_1d(np.asarray(eta_points, dtype=np.complex128))
    if np.any(np.abs(pts) > 3 + 1e-12):
        raise ValueError("series comparison is limited to |eta| <= 3")
    s = np.asarray(r_series(mu, branch, pts))
    c = np.asarray(r_compact(mu, branch, pts))
    scale = np.maximum(np.abs(c), np.abs(s))
    rel = np.where(scale > 0, np.abs(s - c) / np.where(scale > 0, scale, 1), 0.0)
    return ResidualReport(f"series_equivalence_{branch}", list(pts), float(rel.max()),
                          float(scale.max()), SERIES_TOL)


# ---------------------------------------------------------------- boundary

def boundary_residual(frame, coeffs, y_ref=1.0, n_ref=21):
    """|phi(0)| and |phi'(0)| over max(1, sup |phi| on [0, y_ref])."""
    phi0 = complex(stream_function(frame, coeffs, 0.0))
    dphi0 = complex(stream_function_prime(frame, coeffs, 0.0))
    sup = float(np.abs(stream_function(frame, coeffs, np.linspace(0, y_ref, n_ref))).max())
    scale = max(1.0, sup)
    worst = max(abs(phi0), abs(dphi0)) / scale
    return ResidualReport("boundary", [0j], worst, scale, BOUNDARY_TOL,
                          {"phi0": abs(phi0), "dphi0": abs(dphi0)})


def criterion_wall_report(a=1.0, beta=-1.0, k=10**6, threshold=1e-6):
    """|W(z*)| for the criterion pair seen from a wall at distance a, z* = -a (|beta| k)^{1/4}."""
    z_star = -a * (abs(beta) * k) ** 0.25
    val = abs(complex(w_criterion(z_star)))
    return ResidualReport("criterion_wall", [complex(z_star)], val, 1.0, threshold,
                          {"a": a, "beta": beta, "k": k})


# ---------------------------------------------------------------- samplers

def _disk(rng, n, radius):
    r = radius * np.sqrt(rng.random(n))
    return r * np.exp(2j * np.pi * rng.random(n))


def clear_points(rng, n, radius, poles, clearance=MIN_CLEARANCE + 0.05):
    """Random points in a disk that keep ``clearance`` from every pole."""
    poles = np.asarray(list(poles), dtype=np.complex128)
    out = []
    while len(out) < n:
        z = complex(_disk(rng, 1, radius)[0])
        if poles.size == 0 or np.min(np.abs(z - poles)) >= clearance:
            out.append(z)
    return np.array(out)


def sample_generic_mu(rng, n, box=(3.0, 1.0), avoid=0.25):
    """mu in a box, kept away from the odd integers."""
    out = []
    while len(out) < n:
        mu = complex(rng.uniform(-box[0], box[0]), rng.uniform(-box[1], box[1]))
        odd = 2 * round((mu.real + 1) / 2) - 1
        if abs(mu - odd) >= avoid:
            out.append(mu)
    return out


# ---------------------------------------------------------------- suites

def tau_criterion_report(reference=complex(-0.706, -0.706), tol=2e-3):
    tau = tau_criterion()
    err = max(abs(tau.real - reference.real), abs(tau.imag - reference.imag))
    return ResidualReport("tau_criterion", [tau], err, abs(tau), tol)


def w_limit_report(Z=8.0, tol=1e-6):
    lo = abs(complex(w_criterion(-Z)))
    hi = abs(complex(w_criterion(Z)) - 1)
    return ResidualReport("W_limits", [complex(-Z), complex(Z)], max(lo, hi), 1.0, tol,
                          {"W(-Z)": lo, "W(Z)-1": hi})


def w_ode_report(rng, n=100, tau=None):
    tau = tau_criterion() if tau is None else complex(tau)
    z = np.sort(rng.uniform(-4, 4, n))
    return residual("W_ode", w_criterion, {"tau": tau}, z, singularities=W_POLES)


def x_ode_reports(rng, n_tau=10, n_pts=30):
    out = []
    for tau in _disk(rng, n_tau, 3.0):
        poles = (cmath.sqrt(tau), -cmath.sqrt(tau))
        z = clear_points(rng, n_pts, 4.0, poles)
        for branch in (1, 2):
            rep = residual("X_ode", lambda w, b=branch, t=tau: x_tau(t, b, w),
                           {"tau": complex(tau)}, z, singularities=poles)
            rep.details = {"tau": [tau.real, tau.imag], "branch": branch}
            out.append(rep)
    return out


def suite_recurrences(**_):
    return [check_recurrences(mu, 200) for mu in RECURRENCE_MUS]


def suite_criterion(seed=SEED, tau_shift=0.0, **_):
    rng = np.random.default_rng(seed)
    tau = tau_criterion() + tau_shift
    return [tau_criterion_report(), w_limit_report(), w_ode_report(rng, tau=tau)]


def suite_odes(seed=SEED, **_):
    rng = np.random.default_rng(seed)
    reps = x_ode_reports(rng, 3, 10)
    for mu in (2 + 1j, -0.7 + 0.4j):
        poles = (cmath.sqrt(mu), -cmath.sqrt(mu))
        pts = clear_points(rng, 10, 3.0, poles)
        for b in (1, 2):
            reps.append(residual("Y_ode", lambda w, b=b, m=mu: y_mu(m, b, w),
                                 {"mu": mu}, pts, singularities=poles))
            reps.append(residual("R_ode", lambda w, b=b, m=mu: r_compact(m, b, w),
                                 {"mu": mu}, pts))
            reps.append(residual("Schrodinger", lambda w, b=b, m=mu: psi_mu(m, b, w),
                                 {"mu": mu}, pts))
            reps.append(residual("Bsquared", lambda w, b=b, m=mu: psi_mu(m, b, w),
                                 {"mu": mu}, pts[:4]))
            for direction in ("up", "down"):
                reps.append(residual("ladder", lambda w, b=b, m=mu: psi_mu(m, b, w),
                                     {"mu": mu, "direction": direction}, pts[:4]))
    for mu, eta_star in ((0.4 - 0.3j, 0.2 - 0.1j), (1.0, 0.0)):
        basis = UpsilonBasis(mu, eta_star)
        pts = _disk(rng, 4, 2.0)
        for b in (1, 2):
            reps.append(residual("Upsilon_ode", lambda w, b=b: basis.upsilon(b, w),
                                 {"mu": basis.mu}, pts,
                                 local=lambda c, b=b: basis.anchored(b, c)))
    for k in (1, -1):
        frame = build_frame(ShearFlow(0.3, -1.5, 0.4), ModeSpec(k, 0.8 - 0.5j))
        basis = UpsilonBasis(frame.mu, frame.eta_star)
        coeffs = CoefficientTriple(0.3, 1.0, -0.5j)
        zs = rng.uniform(-1.5, 1.5, 4).astype(complex)
        reps.append(residual(
            "F_ode", lambda z: basis.combination(coeffs, frame.rot * z),
            {"tau": frame.tau, "sign": frame.sign}, zs,
            local=lambda c: (lambda z: basis.combination(coeffs, frame.rot * z,
                                                         anchor=frame.rot * c)),
        ))
    return reps


def asymptotic_reports(seed=SEED, z=8.0):
    rng = np.random.default_rng(seed)
    out = []
    for mu in sample_generic_mu(rng, 10):
        for b in (1, 2):
            r = asy.upsilon_ratio(mu, b, 1, z, terms=2)
            out.append(ResidualReport("upsilon_ratio", [mu], abs(r - 1), 1.0, 0.05,
                                      {"branch": b, "terms": 2, "z": z}))
    for mu in (-3, -5):
        for b in (1, 2):
            r = asy.upsilon_ratio(mu, b, 1, z, terms=1)
            out.append(ResidualReport("upsilon_ratio", [complex(mu)], abs(r - 1), 1.0, 0.05,
                                      {"branch": b, "terms": 1, "z": z}))
    for g in (0, -1, 0.7 + 0.1j):
        r = asy.gaussian_integral_ratio(g, 10.0)
        out.append(ResidualReport("integral_ratio", [complex(g)], abs(r - 1), 1.0, 0.05))
    return out


def suite_asymptotics(seed=SEED, **_):
    reps = asymptotic_reports(seed)
    scan = asy.criterion_uniqueness_scan()
    reps.append(ResidualReport("uniqueness_scan", [r.mu for r in scan.bounded],
                               0.0 if scan.unique_at_minus_one else 1.0, 1.0, 0.5,
                               {"bounded": len(scan.bounded), "grid": len(scan.records)}))
    return reps


def suite_boundary(**_):
    frame = build_frame(ShearFlow(0.0, -1.0, 0.0), ModeSpec(1, (1 - 1j) / math.sqrt(2)))
    from .modes import solve_boundary_coefficients

    triple = solve_boundary_coefficients(frame.mu, frame.eta_star)[0]
    return [boundary_residual(frame, triple), criterion_wall_report()]


SUITES = {
    "recurrences": suite_recurrences,
    "odes": suite_odes,
    "criterion": suite_criterion,
    "asymptotics": suite_asymptotics,
    "boundary": suite_boundary,
}


@dataclass
class SuiteReport:
    suite: str
    reports: list

    @property
    def passed(self):
        return all(r.passed for r in self.reports)

    def to_json(self):
        return json.dumps({"suite": self.suite, "passed": self.passed,
                           "reports": [r.to_dict() for r in self.reports]},
                          sort_keys=True, indent=2)


def run_suite(name, seed=SEED, tau_shift=0.0):
    names = list(SUITES) if name == "all" else [name]
    if any(n not in SUITES for n in names):
        raise ValueError(f"unknown suite {name!r}")
    reports = []
    for n in names:
        reports.extend(SUITES[n](seed=seed, tau_shift=tau_shift))
    return SuiteReport(name, reports)


__all__ = [
    "SEED",
    "ResidualReport",
    "check_recurrences",
    "recurrence_terms",
    "residual",
    "derivatives",
    "EQUATIONS",
    "apply_B",
    "factorisation_residual",
    "r_compact",
    "series_equivalence",
    "boundary_residual",
    "criterion_wall_report",
    "clear_points",
    "sample_generic_mu",
    "SuiteReport",
    "run_suite",
    "SUITES",
]
