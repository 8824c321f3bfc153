"""Quasi-eigenmodes: the Upsilon basis, boundary coefficients, stream function.

For an oscillator solution psi of -psi'' + eta^2 psi = lam psi the basis
function is

    Upsilon(eta) = int_{eta*}^{eta} (kappa + (eta^2 - xi^2)/2) psi(xi) dxi - psi'(eta*)/2,

which equals (1/2) B_mu applied to the primitive of psi. For psi in the kernel
of B_{mu+2} (the generic case) kappa = 1. At mu = 1 the second branch uses
g = e^{eta^2/2} erf(eta) from the kernel of B_{mu-2}, which needs kappa = -1.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DegenerateSystem
from .frames import Frame
from .quadrature import integrate_segments
from .solutions import g_mu1, g_mu1_prime, psi_mu, psi_mu_prime

MU1_TOL = 1e-12
NULL_REL_THRESHOLD = 1e-10
DEGENERATE_ROW_NORM = 1e-14
UPSILON_REL_TOL = 1e-12
UPSILON_ABS_TOL = 1e-15


@dataclass(frozen=True)
class CoefficientTriple:
    c0: complex
    c1: complex
    c2: complex

    def as_array(self):
        return np.array([self.c0, self.c1, self.c2], dtype=np.complex128)

    def to_dict(self):
        return {f"{name}_{part}": getattr(complex(getattr(self, name)), part)
                for name in ("c0", "c1", "c2") for part in ("real", "imag")}


class UpsilonBasis:
    """The two integral-operator basis functions for given (mu, eta*)."""

    def __init__(self, mu, eta_star=0j, rel_tol=UPSILON_REL_TOL, abs_tol=UPSILON_ABS_TOL):
        self.mu = complex(mu)
        self.eta_star = complex(eta_star)
        self.special_mu1 = abs(self.mu - 1) < MU1_TOL
        self.rel_tol = rel_tol
        self.abs_tol = abs_tol
        self._d_star = {b: complex(self.kernel_prime(b, self.eta_star)) for b in (1, 2)}

    # kernel functions -------------------------------------------------
    def kappa(self, branch):
        return -1.0 if (branch == 2 and self.special_mu1) else 1.0

    def kernel(self, branch, eta):
        if branch == 2 and self.special_mu1:
            return g_mu1(eta)
        return psi_mu(self.mu, branch, eta)

    def kernel_prime(self, branch, eta):
        if branch == 2 and self.special_mu1:
            return g_mu1_prime(eta)
        return psi_mu_prime(self.mu, branch, eta)

    def quadratic(self, eta):
        return self.mu - np.asarray(eta) ** 2 if np.ndim(eta) else self.mu - complex(eta) ** 2

    # integrals ----------------------------------------------------------
    def _moments(self, branch, starts, ends):
        def f(xi):
            v = np.asarray(self.kernel(branch, xi), dtype=np.complex128)
            return np.stack([v, xi * xi * v], axis=-1)

        return integrate_segments(f, starts, ends, self.rel_tol, self.abs_tol)

    def moments(self, branch, eta, anchor=None):
        """(I0, I2) = int_{eta*}^{eta} (1, xi^2) psi, optionally split at ``anchor``."""
        ee = np.atleast_1d(np.asarray(eta, dtype=np.complex128)).ravel()
        if anchor is None:
            return self._moments(branch, np.full_like(ee, self.eta_star), ee)
        base = self._moments(branch, [self.eta_star], [complex(anchor)])[0]
        return base[None, :] + self._moments(branch, np.full_like(ee, complex(anchor)), ee)

    # basis values -------------------------------------------------------
    def upsilon(self, branch, eta, anchor=None):
        if branch not in (1, 2):
            raise ValueError("branch must be 1 or 2")
        scalar = np.ndim(eta) == 0
        ee = np.atleast_1d(np.asarray(eta, dtype=np.complex128))
        m = self.moments(branch, ee, anchor).reshape(ee.shape + (2,))
        val = m[..., 0] * (self.kappa(branch) + 0.5 * ee * ee) - 0.5 * m[..., 1] \
            - 0.5 * self._d_star[branch]
        return complex(val.ravel()[0]) if scalar else val

    def upsilon_prime(self, branch, eta, anchor=None):
        """Analytic derivative kappa psi(eta) + eta I0(eta)."""
        scalar = np.ndim(eta) == 0
        ee = np.atleast_1d(np.asarray(eta, dtype=np.complex128))
        m = self.moments(branch, ee, anchor).reshape(ee.shape + (2,))
        val = self.kappa(branch) * np.asarray(self.kernel(branch, ee)) + ee * m[..., 0]
        return complex(val.ravel()[0]) if scalar else val

    def anchored(self, branch, anchor):
        """Evaluator for points near ``anchor`` (used on Cauchy circles)."""
        return lambda w: self.upsilon(branch, w, anchor=anchor)

    def combination(self, coeffs, eta, anchor=None):
        c = coeffs.as_array() if isinstance(coeffs, CoefficientTriple) else np.asarray(coeffs)
        out = c[0] * self.quadratic(eta)
        for b in (1, 2):
            if c[b] != 0:
                out = out + c[b] * self.upsilon(b, eta, anchor)
        return out

    def combination_prime(self, coeffs, eta, anchor=None):
        c = coeffs.as_array() if isinstance(coeffs, CoefficientTriple) else np.asarray(coeffs)
        ee = np.asarray(eta, dtype=np.complex128) if np.ndim(eta) else complex(eta)
        out = -2 * ee * c[0]
        for b in (1, 2):
            if c[b] != 0:
                out = out + c[b] * self.upsilon_prime(b, eta, anchor)
        return out


def upsilon(basis: UpsilonBasis, branch, eta):
    return basis.upsilon(branch, eta)


# ---------------------------------------------------------------- boundary

def boundary_matrix(mu, eta_star):
    """Rows: Upsilon-combination value and derivative at eta*."""
    basis = UpsilonBasis(mu, eta_star)
    e = basis.eta_star
    return np.array([
        [basis.mu - e * e, -0.5 * basis.kernel_prime(1, e), -0.5 * basis.kernel_prime(2, e)],
        [-2 * e, basis.kernel(1, e), basis.kappa(2) * basis.kernel(2, e)],
    ], dtype=np.complex128)


def check_degenerate(matrix):
    if np.all(np.linalg.norm(matrix, axis=1) < DEGENERATE_ROW_NORM):
        raise DegenerateSystem("boundary system has no nonzero row")


def nullspace_triples(matrix):
    """Basis of the nullspace, each vector scaled so its largest entry is 1."""
    check_degenerate(matrix)
    _, s, vh = np.linalg.svd(matrix)
    rank = int(np.sum(s > NULL_REL_THRESHOLD * s[0])) if s[0] > 0 else 0
    triples = []
    for v in vh[rank:]:
        v = v.conj()
        v = v / v[np.argmax(np.abs(v))]
        triples.append(CoefficientTriple(*(complex(x) for x in v)))
    return triples


def solve_boundary_coefficients(mu, eta_star):
    """Coefficient triples for which the mode satisfies no-slip at eta*."""
    return nullspace_triples(boundary_matrix(mu, eta_star))


# ---------------------------------------------------------------- stream fn

_BASIS_CACHE: dict = {}


def basis_for(frame: Frame) -> UpsilonBasis:
    key = (frame.mu, frame.eta_star)
    b = _BASIS_CACHE.get(key)
    if b is None:
        b = _BASIS_CACHE.setdefault(key, UpsilonBasis(frame.mu, frame.eta_star))
    return b


def stream_function(frame: Frame, coeffs, y, basis=None):
    """phi_k(y) = c0 (mu - eta^2) + c1 Upsilon_1(eta) + c2 Upsilon_2(eta), eta = eta(y).

    ``basis`` overrides the cached basis (for custom quadrature tolerances).
    """
    return (basis or basis_for(frame)).combination(coeffs, frame.y_to_eta(y))


def stream_function_prime(frame: Frame, coeffs, y, basis=None):
    """d phi_k / dy via the analytic Upsilon derivative and the chain rule."""
    return (basis or basis_for(frame)).combination_prime(coeffs, frame.y_to_eta(y)) \
        * frame.deta_dy


def velocity_field(frame: Frame, coeffs, t, x, y):
    """(u, v) = (phi', -i k phi) e^{i k x + sigma sqrt|k| t}."""
    k = frame.mode.k
    phase = np.exp(1j * k * np.asarray(x) + frame.mode.sigma * math.sqrt(abs(k)) * np.asarray(t))
    u = stream_function_prime(frame, coeffs, y) * phase
    v = -1j * k * stream_function(frame, coeffs, y) * phase
    if np.ndim(u) == 0:
        return complex(u), complex(v)
    return u, v


# ---------------------------------------------------------------- sampling

def format_float(x) -> str:
    """17 significant digits, always written as a float literal."""
    s = format(float(x), ".17g")
    if not any(ch in s for ch in ".eni"):
        s += ".0"
    return s


def thread_count(default=1):
    raw = os.environ.get("PRANDTL_MODES_THREADS", "")
    try:
        n = int(raw)
    except ValueError:
        return default
    return max(1, n)


@dataclass
class SampledProfile:
    """Ordered (coordinate, value) rows plus metadata for export."""

    rows: list
    meta: dict = field(default_factory=dict)
    coord_name: str = "y"

    def __post_init__(self):
        coords = [r[0] for r in self.rows]
        if any(b <= a for a, b in zip(coords, coords[1:])):
            raise ValueError("coordinates must be strictly increasing")

    @property
    def coords(self):
        return np.array([r[0] for r in self.rows], dtype=float)

    @property
    def values(self):
        return np.array([r[1] for r in self.rows], dtype=np.complex128)

    def to_csv(self, path):
        lines = [f"{self.coord_name},re,im"]
        for c, v in self.rows:
            v = complex(v)
            lines.append(f"{format_float(c)},{format_float(v.real)},{format_float(v.imag)}")
        Path(path).write_text("\n".join(lines) + "\n")

    def write(self, path):
        """CSV at ``path`` and metadata JSON next to it (same stem, .json)."""
        path = Path(path)
        self.to_csv(path)
        meta_path = path.with_suffix(".json")
        meta_path.write_text(json.dumps(self.meta, sort_keys=True, indent=2) + "\n")
        return path, meta_path


def sample_function(f, lo, hi, n, threads=None, coord_name="y", meta=None):
    """Evaluate a vectorised ``f`` on a uniform grid, optionally in threads."""
    if n < 2:
        raise ValueError("need at least two samples")
    if not hi > lo:
        raise ValueError("grid bounds must satisfy min < max")
    grid = np.linspace(lo, hi, int(n))
    threads = thread_count() if threads is None else max(1, int(threads))
    if threads == 1 or n < 2 * threads:
        vals = np.asarray(f(grid), dtype=np.complex128)
    else:
        chunks = np.array_split(grid, threads)
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda g: np.asarray(f(g), dtype=np.complex128), chunks))
        vals = np.concatenate(parts)
    rows = [(float(c), complex(v)) for c, v in zip(grid, vals)]
    return SampledProfile(rows, dict(meta or {}), coord_name)


def sample_profile(frame: Frame, coeffs, y_min, y_max, n, threads=None, basis=None):
    """phi_k on a uniform y grid with frame and coefficients in the metadata."""
    if y_min < 0:
        raise ValueError("y_min must be nonnegative")
    meta = {"frame": frame.to_dict(), "coefficients": coeffs.to_dict(),
            "grid": {"min": y_min, "max": y_max, "n": int(n)}}
    return sample_function(lambda y: stream_function(frame, coeffs, y, basis),
                           y_min, y_max, n, threads, "y", meta)


__all__ = [
    "CoefficientTriple",
    "UpsilonBasis",
    "upsilon",
    "boundary_matrix",
    "check_degenerate",
    "nullspace_triples",
    "solve_boundary_coefficients",
    "basis_for",
    "stream_function",
    "stream_function_prime",
    "velocity_field",
    "SampledProfile",
    "sample_function",
    "sample_profile",
    "thread_count",
    "format_float",
]
