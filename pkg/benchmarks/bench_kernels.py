"""Time the numba kernels against the plain Python / numpy fallback.

Run: python3 benchmarks/bench_kernels.py --n 200000 --size 256x128 --repeats 3
"""

import argparse
import time

import numpy as np

from skewtent import kernels


def best_of(fn, repeats):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def identical(a, b):
    if isinstance(a, (list, tuple)):
        return len(a) == len(b) and all(identical(x, y) for x, y in zip(a, b))
    if isinstance(a, np.ndarray):
        return a.dtype == b.dtype and a.tobytes() == b.tobytes()
    return a == b


def cases(n, width, height, prefix):
    alphas, betas = np.meshgrid(
        (np.arange(width) + 0.5) / width, 1.0 - (np.arange(height) + 0.5) * (0.5 / height)
    )
    inside = (alphas > 1.0 - betas) & (alphas < betas)
    alphas = np.ascontiguousarray(np.where(inside, alphas, 0.5))
    betas = np.ascontiguousarray(np.where(inside, betas, 1.0))
    pool = np.random.default_rng(0).random(64)
    return {
        f"birkhoff_count n={n}": lambda k: k["birkhoff_count"](0.3, 0.8, 0.377, 0, 1000, n + 1000, pool, 0),
        "kneading_codes n=1600 x 200": lambda k: [
            k["kneading_codes"](0.3 + 1e-4 * i, 0.8, 1600, 1e-12) for i in range(200)
        ],
        f"kneading_grid {width}x{height} prefix={prefix}": lambda k: k["kneading_grid"](
            alphas, betas, prefix, 1e-12
        ),
    }


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--n", type=int, default=200_000)
    p.add_argument("--size", default="256x128")
    p.add_argument("--prefix", type=int, default=10)
    p.add_argument("--repeats", type=int, default=3)
    args = p.parse_args()
    width, height = (int(v) for v in args.size.split("x"))

    if not kernels.HAVE_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")

    print(f"{'kernel':<36}{'python (s)':>12}{'numba (s)':>12}{'speedup':>10}  same")
    for name, run in cases(args.n, width, height, args.prefix).items():
        run(kernels.numba_kernels)  # compile outside the timing
        t_py, out_py = best_of(lambda: run(kernels.python_kernels), args.repeats)
        t_nb, out_nb = best_of(lambda: run(kernels.numba_kernels), args.repeats)
        same = identical(out_py, out_nb)
        print(f"{name:<36}{t_py:>12.4f}{t_nb:>12.4f}{t_py / max(t_nb, 1e-9):>9.1f}x  {same}")


if __name__ == "__main__":
    main()
