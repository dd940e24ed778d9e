"""Compare the compiled and pure-Python kernels.

    python benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import timeit

import numpy as np

from topsp.kernels import get_backend


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    backends = {"python": get_backend("python")}
    try:
        backends["cython"] = get_backend("cython")
    except ImportError:
        print("compiled extension not built; timing the fallback only")

    rng = np.random.default_rng(0)
    cases = []
    for n in (10, 30, 60):
        A = rng.normal(size=(n, n))
        M = np.ascontiguousarray(A + A.T)
        cases.append((f"jacobi_eigh n={n}", lambda b, M=M: b.jacobi_eigh(M)))
    for n in (64, 512):
        c, s = rng.normal(size=n), rng.normal(size=n)
        cases.append((f"cyclic_convolve n={n}", lambda b, c=c, s=s: b.cyclic_convolve(c, s)))

    names = list(backends)
    print(f"{'kernel':<24}" + "".join(f"{n + ' (ms)':>16}" for n in names) + ("   speedup" if len(names) > 1 else ""))
    for label, fn in cases:
        times = {}
        for name, b in backends.items():
            number = 3
            times[name] = min(timeit.repeat(lambda: fn(b), number=number, repeat=args.repeat)) / number * 1e3
        line = f"{label:<24}" + "".join(f"{times[n]:>16.3f}" for n in names)
        if len(names) > 1:
            line += f"{times['python'] / times['cython']:>9.1f}x"
        print(line)


if __name__ == "__main__":
    main()
