#!/usr/bin/env python3
"""Benchmark the compiled QL kernel against the pure-Python fallback.

Times full eigendecompositions of random symmetric tridiagonal matrices
at the block sizes the simulator actually visits, plus a realistic
workload: every block of a mean-25 coherent pair (the inhibited-collision
scan).  numpy.linalg.eigh on the dense matrix is shown for reference.
"""

import time

import numpy as np

from twomodebec.kernels import BACKEND
from twomodebec.kernels.ql import ql_decompose as ql_python

try:
    from twomodebec.kernels._ql_cy import ql_decompose as ql_compiled
except ImportError:
    ql_compiled = None


def timed(fn, repeats):
    best = np.inf
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def bench_sizes():
    rng = np.random.default_rng(12345)
    print(f"active backend: {BACKEND}")
    print(f"{'n':>5} {'python':>12} {'compiled':>12} {'speedup':>9} {'eigh':>12}")
    for n in (16, 32, 64, 128, 256, 512):
        d = rng.normal(size=n)
        e = rng.normal(size=n - 1)
        dense = np.diag(d) + np.diag(e, 1) + np.diag(e, -1)
        repeats = 3 if n >= 256 else 7
        t_py = timed(lambda: ql_python(d, e), repeats)
        t_eigh = timed(lambda: np.linalg.eigh(dense), repeats)
        if ql_compiled is None:
            print(f"{n:>5} {t_py * 1e3:>10.2f}ms {'-':>12} {'-':>9} "
                  f"{t_eigh * 1e3:>10.2f}ms")
            continue
        t_cy = timed(lambda: ql_compiled(d, e), repeats)
        print(f"{n:>5} {t_py * 1e3:>10.2f}ms {t_cy * 1e3:>10.2f}ms "
              f"{t_py / t_cy:>8.1f}x {t_eigh * 1e3:>10.2f}ms")


def bench_block_sweep():
    """All blocks for a mean-25 state: the per-parameter-set setup cost."""
    from twomodebec.evolution import build_block, diagonalize_block
    from twomodebec.model import ModelParams, poisson_cutoff

    p = ModelParams(0.0, 0.0, 2.0, 2.0, 1.5, 1.0)
    n_max = poisson_cutoff(25.0, 1e-12)
    blocks = [build_block(p, n) for n in range(n_max + 1)]

    def sweep(decompose):
        for h in blocks:
            decompose(h.diag, h.offdiag)

    print(f"\nblock sweep, {n_max + 1} blocks up to dim {n_max + 1} "
          f"(mean-25 coherent pair):")
    t_py = timed(lambda: sweep(ql_python), 3)
    print(f"  python   {t_py * 1e3:8.2f} ms")
    if ql_compiled is not None:
        t_cy = timed(lambda: sweep(ql_compiled), 3)
        print(f"  compiled {t_cy * 1e3:8.2f} ms  ({t_py / t_cy:.1f}x)")
    t_full = timed(lambda: [diagonalize_block(h) for h in blocks], 3)
    print(f"  active backend via diagonalize_block {t_full * 1e3:8.2f} ms")


if __name__ == "__main__":
    bench_sizes()
    bench_block_sweep()
