"""Rescaled and rotated coordinates for a quadratic shear flow.

Physical wall distance ``y`` maps to ``z = scale (y - a)`` and then to the
rotated variable ``eta = rot z``. The growth parameter ``sigma`` maps to
``tau`` (z frame) and ``mu`` (eta frame).
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidMode, InvalidShear


@dataclass(frozen=True)
class ShearFlow:
    """U(y) = alpha + beta (y - a)^2 with beta < 0 and a >= 0."""

    alpha: float
    beta: float
    a: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.alpha) and math.isfinite(self.beta) and math.isfinite(self.a)):
            raise InvalidShear("shear parameters must be finite")
        if self.beta >= 0:
            raise InvalidShear(f"beta must be negative, got {self.beta}")
        if self.a < 0:
            raise InvalidShear(f"critical point must satisfy a >= 0, got {self.a}")

    def velocity(self, y):
        return self.alpha + self.beta * (np.asarray(y) - self.a) ** 2


@dataclass(frozen=True)
class ModeSpec:
    """Tangential wavenumber ``k`` (nonzero integer) and growth coefficient ``sigma``."""

    k: int
    sigma: complex

    def __post_init__(self):
        if int(self.k) != self.k or self.k == 0:
            raise InvalidMode(f"k must be a nonzero integer, got {self.k}")
        object.__setattr__(self, "k", int(self.k))
        object.__setattr__(self, "sigma", complex(self.sigma))


@dataclass(frozen=True)
class Frame:
    """Derived constants for one (shear, mode) pair. Build with :func:`build_frame`."""

    shear: ShearFlow
    mode: ModeSpec
    sign: int
    scale: float
    tau: complex
    mu: complex
    z_star: float
    eta_star: complex
    rot: complex = field(repr=False)

    def y_to_z(self, y):
        if np.ndim(y):
            return self.scale * (np.asarray(y, dtype=float) - self.shear.a)
        return self.scale * (float(y) - self.shear.a)

    def z_to_y(self, z):
        return z / self.scale + self.shear.a

    def z_to_eta(self, z):
        return self.rot * z

    def eta_to_z(self, eta):
        z = np.asarray(eta) / self.rot
        return z.real if np.ndim(z) else complex(z).real

    def y_to_eta(self, y):
        return self.z_to_eta(self.y_to_z(y))

    def eta_to_y(self, eta):
        return self.z_to_y(self.eta_to_z(eta))

    @property
    def deta_dy(self):
        return self.rot * self.scale

    def to_dict(self):
        return {
            "alpha": self.shear.alpha,
            "beta": self.shear.beta,
            "a": self.shear.a,
            "k": self.mode.k,
            "sigma_re": self.mode.sigma.real,
            "sigma_im": self.mode.sigma.imag,
            "tau_re": self.tau.real,
            "tau_im": self.tau.imag,
            "mu_re": self.mu.real,
            "mu_im": self.mu.imag,
            "scale": self.scale,
            "z_star": self.z_star,
            "eta_star_re": self.eta_star.real,
            "eta_star_im": self.eta_star.imag,
        }


def build_frame(shear: ShearFlow, mode: ModeSpec) -> Frame:
    """Derive tau, mu, the starting point and the rotation from physical parameters."""
    sign = 1 if mode.k > 0 else -1
    ak = abs(mode.k)
    ab = abs(shear.beta)
    scale = (ab * ak) ** 0.25
    tau = -1j * mode.sigma / math.sqrt(ab) + sign * shear.alpha * math.sqrt(ak / ab)
    mu = -1j * tau * cmath.exp(sign * 1j * math.pi / 4)
    rot = cmath.exp(-sign * 1j * math.pi / 8)
    z_star = -shear.a * scale
    return Frame(shear, mode, sign, scale, tau, mu, z_star, rot * z_star, rot)


def mu_direct(shear: ShearFlow, mode: ModeSpec) -> complex:
    """mu written directly in terms of sigma and alpha (no detour through tau)."""
    sign = 1 if mode.k > 0 else -1
    ab = math.sqrt(abs(shear.beta))
    return (-mode.sigma * cmath.exp(sign * 1j * math.pi / 4) / ab
            + shear.alpha * math.sqrt(abs(mode.k)) * cmath.exp(-sign * 1j * math.pi / 4) / ab)


def frame_to_json(frame: Frame) -> str:
    return json.dumps(frame.to_dict(), sort_keys=True)


def params_from_dict(d) -> tuple[ShearFlow, ModeSpec]:
    """Rebuild (shear, mode) from a dict with keys alpha, beta, a, k, sigma_re, sigma_im."""
    shear = ShearFlow(float(d["alpha"]), float(d["beta"]), float(d.get("a", 0.0)))
    mode = ModeSpec(int(d["k"]), complex(float(d["sigma_re"]), float(d.get("sigma_im", 0.0))))
    return shear, mode


def frame_from_json(text: str) -> Frame:
    return build_frame(*params_from_dict(json.loads(text)))


__all__ = [
    "ShearFlow",
    "ModeSpec",
    "Frame",
    "build_frame",
    "mu_direct",
    "frame_to_json",
    "frame_from_json",
    "params_from_dict",
]
