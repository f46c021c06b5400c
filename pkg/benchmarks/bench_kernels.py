"""Time the compiled kernels against the pure-Python fallback.

Usage: ``python3 benchmarks/bench_kernels.py [--samples N] [--repeat R]``.
Prints one line per kernel with the best-of-R time for each backend and
the speedup; the compiled column is omitted when the extension is absent.
"""
import argparse
import timeit

import numpy as np

from rectcurves import kernels


def frenet_stack(n, N, rng):
    """Skew Frenet matrices with positive curvatures on the super-diagonal."""
    K = np.zeros((N, n, n))
    k = 1.0 + 0.3 * rng.random((N, n - 1))
    idx = np.arange(n - 1)
    K[:, idx, idx + 1] = k
    K[:, idx + 1, idx] = -k
    return K


def workloads(N, n, rng):
    K = frenet_stack(n, N, rng)
    Kmid = 0.5 * (K[1:] + K[:-1])
    T = rng.standard_normal((N, n))
    T /= np.linalg.norm(T, axis=1)[:, None]
    dT = 0.1 * rng.standard_normal((N, n))
    V0 = np.linalg.qr(rng.standard_normal((n, n)))[0][: n - 1]
    V = rng.standard_normal((N, n, n))
    return {
        "gram_schmidt_batch": lambda b: b.gram_schmidt_batch(V, 1e-10),
        "rk4_affine": lambda b: b.rk4_affine(K, Kmid, np.eye(n)[0], np.ones(n), 1e-3),
        "rk4_frenet": lambda b: b.rk4_frenet(K, Kmid, np.eye(n), np.zeros(n), 1e-3, 16),
        "rk4_transport": lambda b: b.rk4_transport(T, dT, T[1:], dT[1:], V0, 1e-3, 16),
    }


def best_time(fn, backend, repeat):
    return min(timeit.repeat(lambda: fn(backend), number=1, repeat=repeat))


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--samples", type=int, default=4001)
    parser.add_argument("--dimension", type=int, default=4)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)
    rng = np.random.default_rng(0)
    backends = kernels.available_backends()
    print(f"active backend: {kernels.BACKEND}; samples={args.samples}, n={args.dimension}")
    print(f"{'kernel':20s} {'python [ms]':>12s} {'cython [ms]':>12s} {'speedup':>8s}")
    for name, fn in workloads(args.samples, args.dimension, rng).items():
        py = best_time(fn, backends["python"], args.repeat)
        if "cython" in backends:
            cy = best_time(fn, backends["cython"], args.repeat)
            print(f"{name:20s} {1e3 * py:12.2f} {1e3 * cy:12.2f} {py / cy:8.1f}x")
        else:
            print(f"{name:20s} {1e3 * py:12.2f} {'-':>12s} {'-':>8s}")


if __name__ == "__main__":
    main()
