"""Compiled vs pure-Python Jacobi kernel on random Hermitian matrices.

    python benchmarks/bench_eig.py [--dims 4 8 16 32 64] [--repeat 5]

Prints one row per (dimension, kernel): best-of-repeat wall time, sweeps and
the reconstruction residual, plus the speed-up of the compiled kernel.
"""
import argparse
import time

import numpy as np

from qcl import linalg
from qcl.config import TOL


def random_hermitian(rng, n):
    A = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return 0.5 * (A + A.conj().T)


def time_kernel(fn, A, repeat):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        w, V, sweeps = fn(A.copy(), TOL.jacobi_offdiag, TOL.jacobi_max_sweeps)
        best = min(best, time.perf_counter() - t0)
    resid = float(np.max(np.abs((V * w) @ V.conj().T - A)))
    return best, sweeps, resid


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dims", type=int, nargs="+", default=[4, 8, 16, 32, 64])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    rng = np.random.default_rng(args.seed)
    names = sorted(linalg.KERNELS, key=lambda k: k != "python")
    if "compiled" not in names:
        print("compiled kernel not built; timing the python kernel only")
    print(f"{'dim':>4} {'kernel':>9} {'seconds':>10} {'sweeps':>6} {'residual':>9} {'speedup':>8}")
    for n in args.dims:
        A = random_hermitian(rng, n)
        times = {}
        for name in names:
            t, sweeps, resid = time_kernel(linalg.KERNELS[name], A, args.repeat)
            times[name] = t
            speed = f"{times['python'] / t:8.1f}" if name == "compiled" and "python" in times else ""
            print(f"{n:>4} {name:>9} {t:10.5f} {sweeps:>6} {resid:9.1e} {speed}")


if __name__ == "__main__":
    main()
