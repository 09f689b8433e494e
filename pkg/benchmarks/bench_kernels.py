"""Compare the compiled and numpy kernels.

    python benchmarks/bench_kernels.py [--repeat N]

Times ``best_per_h`` (the exact solver's enumeration) for growing k and
``grid_values`` (the grid oracle's sweep) for k = 3, 4, and checks that both
backends return identical arrays.
"""

import argparse
import timeit

import numpy as np

from amccr import _fallback

try:
    from amccr import _kernels
except ImportError:
    _kernels = None


def _time(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def bench_enumeration(repeat):
    rng = np.random.default_rng(0)
    print(f"{'kernel':<22}{'k':>4}{'numpy s':>12}{'cython s':>12}{'speedup':>10}")
    for k in (8, 12, 16, 20):
        beta = np.sort(rng.uniform(0, 50, k))[::-1]
        args = (beta, 1e-9, 1e-12)
        t_np = _time(lambda: _fallback.best_per_h(*args), repeat)
        t_cy = _time(lambda: _kernels.best_per_h(*args), repeat)
        for a, b in zip(_fallback.best_per_h(*args), _kernels.best_per_h(*args)):
            assert np.array_equal(a, b)
        print(f"{'best_per_h':<22}{k:>4}{t_np:>12.3e}{t_cy:>12.3e}{t_np / t_cy:>10.1f}")


def bench_grid(repeat):
    rng = np.random.default_rng(1)
    for k, res in ((3, 200_001), (4, 2001)):
        r = np.sort(rng.uniform(1, 100, k))[::-1]
        beta = (r - 1) / 2
        coords = np.array([np.linspace(-beta[j], beta[j], res) for j in range(k - 2)])
        t_np = _time(lambda: _fallback.grid_values(r, beta, coords, 1e-12), repeat)
        t_cy = _time(lambda: _kernels.grid_values(r, beta, coords, 1e-12), repeat)
        assert np.array_equal(_fallback.grid_values(r, beta, coords, 1e-12), _kernels.grid_values(r, beta, coords, 1e-12))
        label = f"grid_values res={res}"
        print(f"{label:<22}{k:>4}{t_np:>12.3e}{t_cy:>12.3e}{t_np / t_cy:>10.1f}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if _kernels is None:
        raise SystemExit("compiled extension not built; run `pip install -e . --no-build-isolation`")
    bench_enumeration(args.repeat)
    bench_grid(args.repeat)


if __name__ == "__main__":
    main()
