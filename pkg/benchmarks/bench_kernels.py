"""Compare the compiled and pure-Python kernels.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import math
import time

import numpy as np

from qrelax import _pykernels, kernels

WORKLOADS = {
    "quad gaussian b=40": (kernels.GAUSSIAN, 0.0127, 40.0, 0, -0.102, 0.102, 1e-10, 20),
    "quad sinc2 b=150": (kernels.SINC2, 0.0339, 150.0, 0, -0.677, 0.677, 1e-10, 100),
    "quad triangular b=80": (kernels.TRIANGULAR, 0.03, 80.0, 1, -0.03, 0.03, 1e-10, 20),
}


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--samples", type=int, default=1_000_000, help="retardances for the chi sum")
    args = ap.parse_args()

    backends = kernels.available_backends()
    if "cython" not in backends:
        print("compiled extension not built; only the Python backend is available")
    names = sorted(backends)
    print(f"{'workload':<28}" + "".join(f"{n:>12}" for n in names) + f"{'speedup':>10}")

    def row(label, call):
        t = {n: best_of(lambda: call(backends[n]), args.repeat) for n in names}
        ratio = t["python"] / t["cython"] if "cython" in t else math.nan
        print(f"{label:<28}" + "".join(f"{t[n] * 1e3:>10.2f}ms" for n in names) + f"{ratio:>9.1f}x")

    for label, wl in WORKLOADS.items():
        row(label, lambda mod, wl=wl: mod.fourier_integral(*wl))

    deltas = np.random.default_rng(0).uniform(-50, 50, args.samples)
    row(f"chi sum n={args.samples:.0e}", lambda mod: mod.plate_choi_sum(deltas, math.cos(0.6), math.sin(0.6)))


if __name__ == "__main__":
    main()
