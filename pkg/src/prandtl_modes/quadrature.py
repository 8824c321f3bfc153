"""Straight-segment complex quadrature and Cauchy-integral derivatives.

``integrate_segments`` runs adaptive Gauss-Kronrod (7/15) on many segments at
once: every pending subinterval of every segment is evaluated in a single call
to the integrand, which keeps the Python overhead per round constant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import MaxDepthExceeded, NonConvergent

DEFAULT_REL_TOL = 1e-11
DEFAULT_ABS_TOL = 1e-13
MAX_DEPTH_LIMIT = 40
DEFAULT_RADIUS = 0.5
ROUNDOFF_FACTOR = 100.0

_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

# full 15-point rule on [-1, 1], ordered left to right
NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
KRONROD_W = np.concatenate([_WGK[:-1], _WGK[::-1]])
GAUSS_W = np.zeros(15)
GAUSS_W[1:7:2] = _WG[:3]
GAUSS_W[7] = _WG[3]
GAUSS_W[9:15:2] = _WG[2::-1]


@dataclass(frozen=True)
class PathIntegralSpec:
    """Segment start/end and tolerances for :func:`integrate_segment`."""

    start: complex
    end: complex
    rel_tol: float = DEFAULT_REL_TOL
    abs_tol: float = DEFAULT_ABS_TOL
    max_depth: int = 30

    def __post_init__(self):
        if self.rel_tol <= 0 or self.abs_tol <= 0:
            raise ValueError("tolerances must be positive")
        if not 0 < self.max_depth <= MAX_DEPTH_LIMIT:
            raise ValueError(f"max_depth must lie in 1..{MAX_DEPTH_LIMIT}")


@dataclass(frozen=True)
class DerivativeSpec:
    """Circle for a Cauchy-integral derivative; ``nodes`` is the starting count."""

    center: complex
    order: int = 1
    radius: float = DEFAULT_RADIUS
    nodes: int = 64

    def __post_init__(self):
        if self.order not in (1, 2, 3):
            raise ValueError("order must be 1, 2 or 3")
        if self.radius <= 0:
            raise ValueError("radius must be positive")
        if self.nodes < 32 or self.nodes & (self.nodes - 1):
            raise ValueError("nodes must be a power of two, at least 32")


def _as_vectorized(f):
    """Wrap ``f`` so it accepts a 1-D complex array, looping if it cannot."""

    def g(w):
        try:
            out = np.asarray(f(w))
            if out.shape[:1] == w.shape:
                return out
        except (TypeError, ValueError):
            pass
        return np.array([f(complex(x)) for x in w])

    return g


def integrate_segments(f, starts, ends, rel_tol=DEFAULT_REL_TOL, abs_tol=DEFAULT_ABS_TOL,
                       max_depth=30):
    """Integrate ``f`` along each straight segment ``starts[i] -> ends[i]``.

    ``f`` maps a 1-D complex array of points to an array whose first axis
    matches; trailing axes are carried through (vector-valued integrands).
    Returns an array of shape ``(n_segments, *trailing)``.
    """
    if rel_tol <= 0 or abs_tol <= 0:
        raise ValueError("tolerances must be positive")
    if not 0 < max_depth <= MAX_DEPTH_LIMIT:
        raise ValueError(f"max_depth must lie in 1..{MAX_DEPTH_LIMIT}")
    starts = np.atleast_1d(np.asarray(starts, dtype=np.complex128))
    ends = np.atleast_1d(np.asarray(ends, dtype=np.complex128))
    starts, ends = np.broadcast_arrays(starts, ends)
    nseg = starts.shape[0]
    fv = _as_vectorized(f)

    seg = np.arange(nseg)
    t0 = np.zeros(nseg)
    t1 = np.ones(nseg)
    depth = np.zeros(nseg, dtype=int)
    live = starts != ends
    seg, t0, t1, depth = seg[live], t0[live], t1[live], depth[live]

    accepted = None
    acc_err = np.zeros(nseg)
    trailing = None
    while seg.size:
        half = 0.5 * (t1 - t0)
        mid = 0.5 * (t1 + t0)
        tt = mid[:, None] + half[:, None] * NODES[None, :]
        length = (ends - starts)[seg]
        pts = starts[seg][:, None] + tt * length[:, None]
        vals = np.asarray(fv(pts.ravel()), dtype=np.complex128)
        if trailing is None:
            trailing = vals.shape[1:]
            accepted = np.zeros((nseg,) + trailing, dtype=np.complex128)
        vals = vals.reshape(pts.shape + trailing)
        scale = (half * length).reshape((-1,) + (1,) * len(trailing))
        kron = np.einsum("ij...,j->i...", vals, KRONROD_W) * scale
        gauss = np.einsum("ij...,j->i...", vals, GAUSS_W) * scale
        resabs = np.einsum("ij...,j->i...", np.abs(vals), KRONROD_W) * np.abs(scale)
        err = np.abs(kron - gauss)
        if trailing:
            err = err.reshape(err.shape[0], -1).max(axis=1)
            resabs = resabs.reshape(resabs.shape[0], -1).max(axis=1)

        # current total per segment: accepted pieces plus every pending estimate
        total = accepted.copy()
        np.add.at(total, seg, kron)
        mag = np.abs(total)
        if trailing:
            mag = mag.reshape(nseg, -1).max(axis=1)
        tol = np.maximum(rel_tol * mag[seg], abs_tol) * (t1 - t0)
        # differences at the rounding level of the integrand itself cannot shrink
        good = (err <= tol) | (err <= ROUNDOFF_FACTOR * np.finfo(float).eps * resabs)
        if np.any(good):
            np.add.at(accepted, seg[good], kron[good])
            np.add.at(acc_err, seg[good], err[good])
        bad = ~good
        if not np.any(bad):
            break
        if np.any(depth[bad] + 1 > max_depth):
            est = total
            errs = acc_err.copy()
            np.add.at(errs, seg[bad], err[bad])
            raise MaxDepthExceeded(
                f"adaptive quadrature exceeded depth {max_depth}",
                estimate=est, error=errs,
            )
        seg, t0, t1, depth, mid = seg[bad], t0[bad], t1[bad], depth[bad], mid[bad]
        seg = np.concatenate([seg, seg])
        t0, t1 = np.concatenate([t0, mid]), np.concatenate([mid, t1])
        depth = np.concatenate([depth, depth]) + 1
    if accepted is None:
        probe = np.asarray(fv(starts[:1]))
        accepted = np.zeros((nseg,) + probe.shape[1:], dtype=np.complex128)
    return accepted


def integrate_segment(f, spec: PathIntegralSpec):
    """Integral of ``f`` along the straight segment described by ``spec``."""
    out = integrate_segments(f, [spec.start], [spec.end], spec.rel_tol, spec.abs_tol,
                             spec.max_depth)[0]
    return complex(out) if out.ndim == 0 else out


def derivative_radius(center, singularities=None, radius=None):
    """Default circle radius: 0.5, shrunk to 0.4 times the clearance from poles."""
    r = DEFAULT_RADIUS if radius is None else float(radius)
    if singularities is not None and len(singularities):
        c = np.atleast_1d(np.asarray(center, dtype=np.complex128))
        s = np.asarray(list(singularities), dtype=np.complex128)
        clearance = np.min(np.abs(c[:, None] - s[None, :]), axis=1)
        if np.any(clearance == 0):
            raise NonConvergent("derivative requested at a declared singularity")
        r = np.minimum(r, 0.4 * clearance)
        return r if np.ndim(center) else float(r[0])
    return r


def _circle_sum(fv, centers, r, order, theta):
    w = centers[:, None] + r[:, None] * np.exp(1j * theta)[None, :]
    vals = np.asarray(fv(w.ravel()), dtype=np.complex128).reshape(w.shape)
    weights = np.exp(-1j * order * theta)
    return (vals * weights[None, :]).sum(axis=1), np.abs(vals).max(axis=1)


def _cauchy(f, center, order, radius, singularities, rel_tol, nodes, max_nodes):
    scalar = np.ndim(center) == 0
    centers = np.atleast_1d(np.asarray(center, dtype=np.complex128)).ravel()
    r = np.broadcast_to(
        np.asarray(derivative_radius(centers, singularities, radius), dtype=float),
        centers.shape,
    ).astype(float)
    n = nodes or (64 if order < 3 else 128)
    fv = _as_vectorized(f)
    norm = math.factorial(order) / r ** order

    theta = 2 * np.pi * np.arange(n) / n
    acc, fmax = _circle_sum(fv, centers, r, order, theta)
    deriv = norm * acc / n
    while True:
        if 2 * n > max_nodes:
            raise NonConvergent(
                f"Cauchy derivative of order {order} did not settle with {n} nodes"
            )
        theta_odd = 2 * np.pi * (np.arange(n) + 0.5) / n
        acc_odd, fmax_odd = _circle_sum(fv, centers, r, order, theta_odd)
        acc = acc + acc_odd
        fmax = np.maximum(fmax, fmax_odd)
        n *= 2
        new = norm * acc / n
        floor = 1e2 * np.finfo(float).eps * norm * fmax
        done = np.abs(new - deriv) <= 10 * rel_tol * np.abs(new) + floor
        deriv = new
        if np.all(done):
            break
    return complex(deriv[0]) if scalar else deriv.reshape(np.shape(center))


def cauchy_derivative(f, center, order=1, radius=None, singularities=None,
                      rel_tol=DEFAULT_REL_TOL, nodes=None, max_nodes=4096):
    """n-th derivative of a holomorphic ``f`` by the trapezoid rule on a circle.

    ``center`` may be an array; each center gets its own circle and the
    integrand is called once per refinement round for all of them.
    """
    if order not in (1, 2, 3):
        raise ValueError("order must be 1, 2 or 3")
    return _cauchy(f, center, order, radius, singularities, rel_tol, nodes, max_nodes)


def cauchy_derivative_high(f, center, order, radius=None, singularities=None,
                           rel_tol=DEFAULT_REL_TOL, nodes=None, max_nodes=4096):
    """Same trapezoid rule for any order from 1 to 8 (fourth-order operator checks)."""
    if not 1 <= order <= 8 or int(order) != order:
        raise ValueError("order must be an integer between 1 and 8")
    return _cauchy(f, center, int(order), radius, singularities, rel_tol, nodes, max_nodes)


__all__ = [
    "PathIntegralSpec",
    "DerivativeSpec",
    "integrate_segment",
    "integrate_segments",
    "cauchy_derivative",
    "cauchy_derivative_high",
    "derivative_radius",
    "DEFAULT_REL_TOL",
    "DEFAULT_ABS_TOL",
]
