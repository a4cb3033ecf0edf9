"""Timing of the numba kernels against their numpy fallbacks.

Run with ``python3 benchmarks/bench_kernels.py``.  Both paths are called in
the same process through the ``use_numba`` switch of each dispatcher, and
their outputs are compared before timing.
"""

import argparse
import time

import numpy as np

from curvjump import _kernels
from curvjump._accel import HAVE_NUMBA


def _best_of(fn, repeats):
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def _cases(n, rng):
    r = 6.0 * np.sqrt(rng.uniform(0, 1, n))
    z = r * np.exp(1j * rng.uniform(-np.pi, np.pi, n))
    theta = np.full(n, 0.0)
    x = rng.uniform(-3, 3, n) + 1j * rng.uniform(-3, 3, n)
    return {
        "scorer_ray": lambda nb: _kernels.scorer_ray(z, theta, use_numba=nb),
        "airy_series": lambda nb: _kernels.airy_series(x, use_numba=nb),
    }


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    p.add_argument("--n", type=int, default=20000, help="points per call")
    p.add_argument("--repeats", type=int, default=5)
    args = p.parse_args(argv)
    if not HAVE_NUMBA:
        print("numba not installed: nothing to compare")
        return 0
    rng = np.random.default_rng(0)
    print(f"{'kernel':<14}{'numpy [s]':>12}{'numba [s]':>12}{'speedup':>10}{'max rel diff':>15}")
    for name, call in _cases(args.n, rng).items():
        ref = np.asarray(call(False)[0])
        got = np.asarray(call(True)[0])  # also triggers compilation
        diff = float(np.max(np.abs(got - ref) / np.maximum(np.abs(ref), 1e-300)))
        t_np = _best_of(lambda: call(False), args.repeats)
        t_nb = _best_of(lambda: call(True), args.repeats)
        print(f"{name:<14}{t_np:>12.4f}{t_nb:>12.4f}{t_np / t_nb:>10.1f}{diff:>15.2e}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
