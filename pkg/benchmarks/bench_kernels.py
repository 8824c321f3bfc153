"""Time the compiled Kummer kernels against the pure-Python mirror.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--size 2000]

Both backends get identical inputs in the three regimes (Taylor, double-double
Taylor, large-argument expansion); the script prints the best wall time of each
and checks that the results agree.
"""

import argparse
import cmath
import time

import numpy as np

from prandtl_modes import _kernels_py as pure
from prandtl_modes.specfun import _dispatch_flags

try:
    from prandtl_modes import _kernels as compiled
except ImportError:  # extension not built
    compiled = None

REGIMES = {
    "taylor |z|<10": (0.3 - 0.4j, 1.7 + 0.2j, (0.5, 9.0), (-0.6, 0.6)),
    "cancelling (near i axis)": (0.5 + 0.1j, 1.5, (6.0, 10.0), (1.45, 1.69)),
    "asymptotic |z|>30": (0.3 - 0.4j, 1.7 + 0.2j, (31.0, 80.0), (-3.1, 3.1)),
}


def points(rng, size, radii, phases):
    r = rng.uniform(*radii, size)
    return r * np.exp(1j * rng.uniform(*phases, size))


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--size", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)

    print(f"{'regime':28s} {'python [s]':>11s} {'cython [s]':>11s} {'speedup':>8s} {'max rel diff':>13s}")
    for name, (a, c, radii, phases) in REGIMES.items():
        z = points(rng, args.size, radii, phases)
        flags = _dispatch_flags(a, c)
        tp, (vp, _) = best_of(lambda: pure.kummer_array(a, c, z, *flags, 30.0), args.repeat)
        if compiled is None:
            print(f"{name:28s} {tp:11.4f} {'n/a':>11s}")
            continue
        tc, (vc, _) = best_of(lambda: compiled.kummer_array(a, c, z, *flags, 30.0), args.repeat)
        diff = float(np.max(np.abs(np.asarray(vc) - vp) / np.abs(vp)))
        print(f"{name:28s} {tp:11.4f} {tc:11.4f} {tp / tc:8.1f} {diff:13.2e}")

    # scalar path, which the quadrature hot loops hit through psi_mu
    z0 = 7.5 * cmath.exp(0.4j)
    flags = _dispatch_flags(0.3 - 0.4j, 1.7)
    n = 20 * args.size
    tp, _ = best_of(lambda: [pure.kummer_scalar(0.3 - 0.4j, 1.7, z0, *flags, 30.0)
                             for _ in range(n // 20)], args.repeat)
    if compiled is not None:
        tc, _ = best_of(lambda: [compiled.kummer_scalar(0.3 - 0.4j, 1.7, z0, *flags, 30.0)
                                 for _ in range(n // 20)], args.repeat)
        print(f"{'scalar calls':28s} {tp:11.4f} {tc:11.4f} {tp / tc:8.1f}")


if __name__ == "__main__":
    main()
