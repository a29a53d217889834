"""Compare the numba and numpy backends on random 3-SAT with n = m.

    python benchmarks/bench_kernels.py --sizes 50 100 200 400

Both backends must produce identical boxes; the script checks that before
reporting times. Numba compile time is excluded by a warm-up run.
"""

import argparse
import time

import numpy as np

from compatsat import _kernels
from compatsat.engine import decide
from compatsat.generate import GenSpec, random_ksat


def best_of(formula, reps):
    best = float("inf")
    verdict = None
    for _ in range(reps):
        t0 = time.perf_counter()
        verdict = decide(formula)
        best = min(best, time.perf_counter() - t0)
    return best, verdict


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[50, 100, 200, 400])
    ap.add_argument("--k", type=int, default=3)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--reps", type=int, default=3)
    ap.add_argument("--numpy-max", type=int, default=400, help="skip the numpy backend above this m")
    args = ap.parse_args(argv)

    backends = ["numba", "numpy"] if _kernels.NUMBA is not None else ["numpy"]
    warm = random_ksat(GenSpec(10, 10, 3, 0))
    for name in backends:
        _kernels.set_backend(name)
        decide(warm)

    print(f"{'m':>6} {'steps':>6} {'numba s':>10} {'numpy s':>10} {'speedup':>8}")
    prev = {}
    for m in args.sizes:
        f = random_ksat(GenSpec(m, m, args.k, args.seed))
        times, boxes, steps = {}, {}, None
        for name in backends:
            if name == "numpy" and m > args.numpy_max:
                continue
            _kernels.set_backend(name)
            times[name], v = best_of(f, args.reps)
            boxes[name] = v.box.bits
            steps = v.step
        if len(boxes) == 2:
            assert np.array_equal(boxes["numba"], boxes["numpy"]), f"backends disagree at m={m}"
        nb, npy = times.get("numba"), times.get("numpy")
        speed = f"{npy / nb:8.1f}" if nb and npy else f"{'-':>8}"
        print(f"{m:>6} {steps:>6} {nb if nb is not None else float('nan'):>10.3f} "
              f"{npy if npy is not None else float('nan'):>10.3f} {speed}")
        prev[m] = times
    for a, b in zip(args.sizes, args.sizes[1:]):
        if b == 2 * a:
            for name in backends:
                if name in prev[a] and name in prev[b]:
                    print(f"{name}: t({b})/t({a}) = {prev[b][name] / prev[a][name]:.1f}")


if __name__ == "__main__":
    main()
