"""Compare the compiled kernels with the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]

The monotonicity scan runs on the exact window arrays that ``validate``
builds for generated elements (a clean map is the worst case: the scan
cannot stop early).  Bellman-Ford runs on the difference systems of the
size the outside-window stage produces.
"""
import argparse
import timeit

import numpy as np

from posetmap import _kernels_py
from posetmap.oracle import generate
from posetmap.pmap import window_arrays, window_bound

try:
    from posetmap import _kernels as compiled
except ImportError:  # extension not built
    compiled = None


def window_cases(count=6):
    cases = []
    for s in range(count):
        a = generate(s)
        cases.append(window_arrays(a, window_bound(a)))
    return cases


def constraint_cases(count=200, seed=0):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        n, m = 7, 30
        out.append((n, rng.integers(0, n, m).astype(np.int64),
                    rng.integers(0, n, m).astype(np.int64),
                    rng.integers(-2, 12, m).astype(np.int64)))
    return out


def bench(backend, windows, systems, repeat):
    t_mono = min(timeit.repeat(lambda: [backend.monotone_violation(p, q) for p, q in windows],
                               number=1, repeat=repeat))
    t_bf = min(timeit.repeat(lambda: [backend.bellman_ford(*c) for c in systems],
                             number=1, repeat=repeat))
    return t_mono, t_bf


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    windows, systems = window_cases(), constraint_cases()
    npts = sum(len(p) for p, _ in windows)
    print(f"{len(windows)} windows ({npts} points total), {len(systems)} constraint systems")
    rows = [("python", _kernels_py)] + ([("cython", compiled)] if compiled else [])
    res = {name: bench(mod, windows, systems, args.repeat) for name, mod in rows}
    print(f"{'backend':<8} {'monotone scan (s)':>18} {'bellman-ford (s)':>17}")
    for name, (m, b) in res.items():
        print(f"{name:<8} {m:>18.4f} {b:>17.4f}")
    if compiled:
        (pm, pb), (cm, cb) = res["python"], res["cython"]
        print(f"speedup  {pm / cm:>17.1f}x {pb / cb:>16.1f}x")


if __name__ == "__main__":
    main()
