"""Time the compiled Jacobi kernel against the numpy fallback.

    python3 benchmarks/bench_jacobi.py [--sizes 16 32 64] [--repeat 5]
"""

import argparse
import time

import numpy as np

from ell0dirac.linalg import available_backends, hermitian_eig


def random_hermitian(n, rng):
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (a + a.conj().T) / 2


def best_time(a, backend, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        hermitian_eig(a, backend=backend)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[16, 32, 64])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    backends = available_backends()
    print(f"{'n':>5} " + " ".join(f"{b:>12}" for b in backends) + "      speedup  max|dlambda|")
    for n in args.sizes:
        a = random_hermitian(n, rng)
        times = {b: best_time(a, b, args.repeat) for b in backends}
        ref = np.linalg.eigvalsh(a)
        err = max(np.abs(hermitian_eig(a, backend=b).eigenvalues - ref).max() for b in backends)
        row = f"{n:>5} " + " ".join(f"{times[b] * 1e3:>10.2f}ms" for b in backends)
        if "compiled" in times:
            row += f"  {times['python'] / times['compiled']:>10.1f}x"
        else:
            row += f"  {'n/a':>11}"
        print(row + f"  {err:>11.1e}")


if __name__ == "__main__":
    main()
