"""Explicit shear-layer velocity around a critical point of a shear flow.

Near a point a with U'(a) = 0 and U''(a) < 0 the corrector only depends on
U''(a). With f(z) = |U''|^{1/4} e^{-i pi/8} z / 2^{1/4},

    V(z) = e^{5 pi i/4} (|U''|^{1/2}/sqrt 2) (1 + f^2)
           (1/2 + erf(f/sqrt 2)/2 + f e^{-f^2/2} / (sqrt(2 pi)(1 + f^2)) - H(z)),

and the bracket is W(kappa z) - H(z) for the criterion profile W with
kappa = (|U''|/2)^{1/4}. H(0) is taken as 1/2.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidShear
from .modes import sample_function
from .specfun import erf_c

E5 = cmath.exp(5j * math.pi / 4)
ROT = cmath.exp(-1j * math.pi / 8)


@dataclass(frozen=True)
class CriticalPoint:
    """Location a and curvature Upp = U''(a) < 0."""

    a: float
    Upp: float

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.Upp)):
            raise InvalidShear("critical point data must be finite")
        if self.Upp >= 0:
            raise InvalidShear(f"U''(a) must be negative, got {self.Upp}")

    @property
    def kappa(self):
        return (abs(self.Upp) / 2) ** 0.25

    @property
    def amplitude(self):
        """|U''|^{1/2}/sqrt 2, the size of the jump of V at 0."""
        return math.sqrt(abs(self.Upp)) / math.sqrt(2)


def heaviside(z):
    return np.where(np.asarray(z) > 0, 1.0, np.where(np.asarray(z) < 0, 0.0, 0.5))


def _f(cp, z):
    return abs(cp.Upp) ** 0.25 * ROT * np.asarray(z, dtype=float) / 2 ** 0.25


def _smooth_part(cp, z):
    f = _f(cp, z)
    one = 1 + f * f
    return one, 0.5 + 0.5 * erf_c(f / math.sqrt(2)) \
        + f * np.exp(-0.5 * f * f) / (math.sqrt(2 * math.pi) * one)


def shear_layer_V(cp: CriticalPoint, z):
    """V(z) on the real line; array in, array out."""
    scalar = np.ndim(z) == 0
    one, bracket = _smooth_part(cp, z)
    val = E5 * cp.amplitude * one * (bracket - heaviside(z))
    return complex(val) if scalar else val


def shear_layer_V_tilde(cp: CriticalPoint, z):
    """V(z) + jump (1 + f^2) H(z): the entire part, continuous through 0."""
    scalar = np.ndim(z) == 0
    one, bracket = _smooth_part(cp, z)
    val = E5 * cp.amplitude * one * bracket
    return complex(val) if scalar else val


def v_sl(cp: CriticalPoint, eps, y):
    """eps^{1/2} V((y - a)/eps^{1/4})."""
    if not eps > 0:
        raise ValueError("eps must be positive")
    z = (np.asarray(y, dtype=float) - cp.a) / eps ** 0.25
    return math.sqrt(eps) * shear_layer_V(cp, z if np.ndim(y) else float(z))


def example_shear(y):
    """U(y) = 2 y e^{-y^2}, the worked example."""
    y = np.asarray(y, dtype=float)
    return 2 * y * np.exp(-y * y)


def example_shear_prime(y):
    y = np.asarray(y, dtype=float)
    return 2 * np.exp(-y * y) * (1 - 2 * y * y)


def example_flow_critical_point():
    """Critical point of 2 y e^{-y^2}: a = 1/sqrt 2, U''(a) = -4 sqrt 2 / sqrt e."""
    return CriticalPoint(1 / math.sqrt(2), -4 * math.sqrt(2) / math.sqrt(math.e))


def sample_V(cp: CriticalPoint, z_min, z_max, n, threads=None):
    """V on a uniform z grid, as a profile with CSV header ``z,re,im``."""
    meta = {"a": cp.a, "Upp": cp.Upp, "grid": {"min": z_min, "max": z_max, "n": int(n)}}
    return sample_function(lambda z: shear_layer_V(cp, z), z_min, z_max, n, threads, "z", meta)


def half_max_width(cp: CriticalPoint, eps, n=8001, span=8.0):
    """Width in y of the region where |v_sl| exceeds half its maximum."""
    h = eps ** 0.25
    y = np.linspace(cp.a - span * h, cp.a + span * h, n)
    mag = np.abs(v_sl(cp, eps, y))
    half = 0.5 * mag.max()
    above = np.nonzero(mag >= half)[0]
    i, j = above[0], above[-1]

    def cross(k0, k1):
        m0, m1 = mag[k0], mag[k1]
        return y[k0] + (half - m0) * (y[k1] - y[k0]) / (m1 - m0)

    left = cross(i - 1, i) if i > 0 else y[0]
    right = cross(j, j + 1) if j < n - 1 else y[-1]
    return right - left


__all__ = [
    "CriticalPoint",
    "heaviside",
    "shear_layer_V",
    "shear_layer_V_tilde",
    "v_sl",
    "example_shear",
    "example_shear_prime",
    "example_flow_critical_point",
    "sample_V",
    "half_max_width",
]
