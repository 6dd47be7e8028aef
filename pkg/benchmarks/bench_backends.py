"""Time the compiled coordinate-descent kernel against the numpy fallback.

Run from the repository root:

    python3 benchmarks/bench_backends.py

Reports per-sweep wall time for both backends and the end-to-end lasso
solve time on the same instance set.
"""

import time

import numpy as np

from jointsparse import _cd_py
from jointsparse._cd_fast import cd_sweep as cd_fast
from jointsparse.convex import ConvexConfig, lasso
from jointsparse.rng import PortableRng


def _instance(seed, n, d):
    rng = PortableRng(seed)
    X = np.asfortranarray(rng.normal(n * d).reshape(n, d))
    col_sq = np.einsum("ij,ij->j", X, X)
    y = rng.normal(n)
    return X, col_sq, y


def time_sweeps(kernel, X, col_sq, y, thresh, repeats):
    best = np.inf
    for _ in range(repeats):
        r = y - y.mean()
        c = np.zeros(X.shape[1])
        t0 = time.perf_counter()
        for _ in range(50):
            kernel(X, col_sq, r, c, thresh)
        best = min(best, (time.perf_counter() - t0) / 50.0)
    return best


def main():
    print("%-14s %10s %10s %8s" % ("size", "python", "compiled", "speedup"))
    for n, d in ((100, 200), (400, 800), (1000, 2000)):
        X, col_sq, y = _instance(1, n, d)
        Xc = np.asfortranarray(X - X.mean(axis=0))
        thresh = 0.05 * np.max(np.abs(Xc.T @ (y - y.mean())))
        t_py = time_sweeps(_cd_py.cd_sweep, Xc, col_sq, y, thresh, 3)
        t_c = time_sweeps(cd_fast, Xc, col_sq, y, thresh, 3)
        print("%-14s %8.3f ms %8.3f ms %7.1fx"
              % ("%dx%d" % (n, d), 1e3 * t_py, 1e3 * t_c, t_py / t_c))

    n, d = 400, 800
    rng = PortableRng(2)
    X = rng.normal(n * d).reshape(n, d)
    y = rng.normal(n)
    Xc = X - X.mean(axis=0)
    lam = 0.1 * 2.0 * np.max(np.abs(Xc.T @ (y - y.mean())))
    t0 = time.perf_counter()
    fit = lasso(X, y, ConvexConfig(lam=lam))
    print("\nfull lasso solve %dx%d: %.3f s (%d sweeps, converged=%s)"
          % (n, d, time.perf_counter() - t0, fit.iterations_used,
             fit.converged))


if __name__ == "__main__":
    main()
