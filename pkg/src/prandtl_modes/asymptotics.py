"""Large-argument behaviour of M and Upsilon, growth classes, uniqueness scan.

Powers of b^2 z^2 are single valued: (b^2 z^2)^g = (z^2)^g e^{i g arg(b^2)}
with arg(b^2) = -sign(k) pi/4 fixed, so results are even in z wherever the
formula is.
"""

from __future__ import annotations

import cmath
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import ExcludedParameter, SectorViolation, UnsupportedMu
from .modes import UpsilonBasis, thread_count
from .quadrature import integrate_segments
from .solutions import neg_odd_polynomials
from .specfun import gamma_c, nonpositive_integer, pochhammer, rgamma

SECTOR_DELTA = 0.05
ODD_TOL = 1e-10
DIVERGENCE_RATIO = 1e3
CRITERION_MU_TOL = 1e-6


def _odd_index(mu, tol=ODD_TOL):
    """n with mu = 2n - 1 (any integer n), else None."""
    mu = complex(mu)
    if abs(mu.imag) > tol:
        return None
    n = round((mu.real + 1) / 2)
    return n if abs(mu.real - (2 * n - 1)) <= tol else None


@dataclass(frozen=True)
class AsymptoticConstants:
    mu: complex
    C1: complex
    C2: complex
    b: complex
    arg_b2: float

    @classmethod
    def from_mu(cls, mu, sign_k=1):
        if sign_k not in (1, -1):
            raise ValueError("sign_k must be +1 or -1")
        mu = complex(mu)
        c1 = math.sqrt(math.pi) * rgamma(-(mu + 1) / 4)
        c2 = 0.5 * math.sqrt(math.pi) * rgamma((1 - mu) / 4)
        return cls(mu, c1, c2, cmath.exp(-sign_k * 1j * math.pi / 8), -sign_k * math.pi / 4)

    def power(self, z, gamma):
        """(b^2 z^2)^gamma under the fixed-argument convention."""
        z = np.asarray(z, dtype=float)
        return np.exp(complex(gamma) * (np.log(z * z) + 1j * self.arg_b2))


# ---------------------------------------------------------------- Kummer

def kummer_asymptotic(a, c, zeta, terms=10):
    """Gamma(c)/Gamma(a) e^zeta zeta^{a-c} sum_k (1-a)_k (c-a)_k / k! zeta^{-k}."""
    zeta = complex(zeta)
    if terms < 1:
        raise ValueError("terms must be positive")
    if zeta == 0 or abs(cmath.phase(zeta)) >= math.pi / 2 - SECTOR_DELTA:
        raise SectorViolation(f"arg(zeta) = {cmath.phase(zeta):.4g} outside the sector")
    a, c = complex(a), complex(c)
    if nonpositive_integer(a) or nonpositive_integer(c - a):
        raise ExcludedParameter("a or c - a is a nonpositive integer")
    s, t = 0j, 1 + 0j
    for k in range(terms):
        s += t
        t *= (1 - a + k) * (c - a + k) / ((k + 1) * zeta)
    return gamma_c(c) * rgamma(a) * cmath.exp(zeta) * zeta ** (a - c) * s


# ---------------------------------------------------------------- Upsilon

def _upsilon_weights(mu, terms):
    """w_1..w_terms of Upsilon ~ (C/2) e^{eta^2/2} eta^s sum_j w_j eta^{1-2j}."""
    s = -(mu + 3) / 2
    u = [pochhammer((5 + mu) / 4, k) * pochhammer((3 + mu) / 4, k) / math.factorial(k)
         for k in range(terms)]
    v = [1 + 0j]
    for k in range(1, terms):
        v.append(u[k] - (s + 1 - 2 * k) * v[k - 1])
    return [-(s + 1 - 2 * j + mu) * v[j - 1] - (s + 2 - 2 * j) * u[j - 1]
            for j in range(1, terms + 1)]


def _generic(consts, branch, z, terms):
    mu = consts.mu
    eta = consts.b * z
    gauss = np.exp(0.5 * consts.b ** 2 * z * z)
    if branch == 1:
        c, lead = consts.C1, consts.power(z, -(mu + 3) / 4)
    else:
        c, lead = consts.C2, eta * consts.power(z, -(mu + 5) / 4)
    w = _upsilon_weights(mu, terms)
    series = sum(wj * eta ** (1 - 2 * j) for j, wj in enumerate(w, start=1))
    return 0.5 * c * gauss * lead * series


def _neg_odd_leading(m, branch, consts, z):
    """Leading term 2 L eta^{m-1} e^{eta^2/2} (times sgn(z) sqrt(pi)/2 off the p branch)."""
    polys = neg_odd_polynomials(m)
    eta = consts.b * z
    base = 2 * np.exp(0.5 * eta * eta) * eta ** (m - 1)
    if branch == polys.i:
        return float(polys.p[-1]) * base
    return np.sign(z) * 0.5 * math.sqrt(math.pi) * float(polys.q[-1]) * base


def upsilon_asymptotic(mu, branch, sign_k, z, terms=1):
    """Large-|z| form of Upsilon_{mu,0,branch}(b z), b = e^{-i sign_k pi/8}.

    ``terms`` > 1 adds the algebraic corrections of the expansion. Negative
    odd mu = -(2m+3) with ``terms == 1`` uses the polynomial leading
    coefficients of the semi-explicit solutions.
    """
    if branch not in (1, 2):
        raise ValueError("branch must be 1 or 2")
    n = _odd_index(mu)
    if n is not None and n >= 0:
        raise UnsupportedMu(f"mu = {2 * n - 1} is a bound state or the special case; "
                            "use the exact evaluator")
    scalar = np.ndim(z) == 0
    zz = np.atleast_1d(np.asarray(z, dtype=float))
    if np.any(zz == 0):
        raise ValueError("z must be nonzero")
    consts = AsymptoticConstants.from_mu(mu, sign_k)
    if n is not None and terms == 1:
        val = _neg_odd_leading(-n - 1, branch, consts, zz)
    else:
        val = _generic(consts, branch, zz, terms)
    return complex(val[0]) if scalar else val


def upsilon_exact(mu, branch, sign_k, z):
    """Upsilon_{mu,0,branch}(b z) by quadrature, the comparison target."""
    b = cmath.exp(-sign_k * 1j * math.pi / 8)
    return UpsilonBasis(mu, 0).upsilon(branch, b * np.asarray(z, dtype=float))


def upsilon_ratio(mu, branch, sign_k, z, terms=1):
    return upsilon_exact(mu, branch, sign_k, z) / upsilon_asymptotic(mu, branch, sign_k, z, terms)


def gaussian_integral_ratio(gamma, z, sign_k=1):
    """int_1^z e^{b^2 xi^2/2}(b^2 xi^2)^gamma dxi * b^2 z / (e^{b^2 z^2/2}(b^2 z^2)^gamma)."""
    consts = AsymptoticConstants.from_mu(0, sign_k)
    b2 = consts.b ** 2

    def f(xi):
        x = xi.real
        return np.exp(0.5 * b2 * x * x) * consts.power(x, gamma)

    integral = integrate_segments(f, [1.0], [float(z)], 1e-12, 1e-300)[0]
    return complex(integral * b2 * z / (np.exp(0.5 * b2 * z * z) * consts.power(z, gamma)))


# ---------------------------------------------------------------- growth classes

@dataclass(frozen=True)
class BoundState:
    n: int
    kind: str = "bound_state"


@dataclass(frozen=True)
class SpecialMuOne:
    kind: str = "special_mu_one"


@dataclass(frozen=True)
class GenericExponential:
    negative_odd_m: int | None = None
    statement: str = ("every combination with (c1, c2) != (0, 0) grows like a Gaussian "
                      "relative to mu - eta^2 at one end of the sector at least")
    kind: str = "generic_exponential"


def classify_growth(mu):
    n = _odd_index(mu)
    if n is None or n < 0:
        return GenericExponential(None if n is None else -n - 1)
    if n == 1:
        return SpecialMuOne()
    return BoundState(n)


# ---------------------------------------------------------------- scan

def default_scan_grid(n=21, radius=3.0):
    """mu values for a tau grid on Im tau < 0, |tau| <= radius, through tau = e^{5 pi i/4}."""
    target = -1 / math.sqrt(2)
    re = np.linspace(-radius, radius, n)
    im = np.linspace(-radius, -0.05, n)
    re[np.argmin(np.abs(re - target))] = target
    im[np.argmin(np.abs(im - target))] = target
    out = []
    for y in im:
        for x in re:
            tau = complex(x, y)
            if abs(tau) <= radius:
                out.append(tau * cmath.exp(-1j * math.pi / 4))
    return out


@dataclass
class ScanRecord:
    mu: complex
    side_ratios: list
    sigma_min: float
    verdict: str
    c0: complex | None = None
    c1: complex | None = None

    def to_dict(self):
        d = asdict(self)
        d["mu"] = [self.mu.real, self.mu.imag]
        for key in ("c0", "c1"):
            v = d[key]
            d[key] = None if v is None else [v.real, v.imag]
        return d


@dataclass
class ScanReport:
    Z: float
    records: list = field(default_factory=list)

    @property
    def bounded(self):
        return [r for r in self.records if r.verdict == "bounded"]

    @property
    def unique_at_minus_one(self):
        b = self.bounded
        return len(b) == 1 and abs(b[0].mu + 1) < CRITERION_MU_TOL

    def to_json(self):
        return json.dumps({"Z": self.Z, "unique_at_minus_one": self.unique_at_minus_one,
                           "records": [r.to_dict() for r in self.records]}, indent=2)


def _scan_one(mu, Z):
    mu = complex(mu)
    b = cmath.exp(-1j * math.pi / 8)
    eta = np.array([-b * Z, b * Z])
    basis = UpsilonBasis(mu, 0)
    quad = mu - eta * eta
    R = np.stack([basis.upsilon(k, eta) / quad for k in (1, 2)], axis=1)
    _, s, vh = np.linalg.svd(R)
    sigma_min = float(s[-1])
    side = [[float(x) for x in np.abs(R[:, k])] for k in (0, 1)]
    if not sigma_min / math.sqrt(2) <= DIVERGENCE_RATIO:
        return ScanRecord(mu, side, sigma_min, "diverges")
    v = vh[-1].conj()
    v = v / v[np.argmax(np.abs(v))]
    r = R @ v
    # tau - z^2 = e^{i pi/4}(mu - eta^2); W(-Z) = 0, W(Z) = 1
    rot = cmath.exp(1j * math.pi / 4)
    c1 = rot / (r[1] - r[0])
    c0 = -c1 * r[0]
    return ScanRecord(mu, side, sigma_min, "bounded", complex(c0), complex(c1))


def criterion_uniqueness_scan(grid=None, Z=8.0, threads=None):
    """Check which mu admit a combination bounded relative to mu - eta^2 at both ends."""
    grid = default_scan_grid() if grid is None else list(grid)
    threads = thread_count() if threads is None else max(1, int(threads))
    if threads == 1:
        records = [_scan_one(m, Z) for m in grid]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            records = list(pool.map(lambda m: _scan_one(m, Z), grid))
    return ScanReport(float(Z), records)


__all__ = [
    "AsymptoticConstants",
    "kummer_asymptotic",
    "upsilon_asymptotic",
    "upsilon_exact",
    "upsilon_ratio",
    "gaussian_integral_ratio",
    "BoundState",
    "SpecialMuOne",
    "GenericExponential",
    "classify_growth",
    "default_scan_grid",
    "ScanRecord",
    "ScanReport",
    "criterion_uniqueness_scan",
]
