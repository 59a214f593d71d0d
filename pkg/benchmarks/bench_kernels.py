"""Compare the compiled endpoint kernel with the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 5]

Times the batch endpoint maximum on simplex grids and one full three-offer
optimization per backend, and checks that both backends agree.
"""
import argparse
import time

import numpy as np

from regret_ultimatum import kernels
from regret_ultimatum.engine import max_delta_R_batch
from regret_ultimatum.model import GameSpec, RegretSpec
from regret_ultimatum.multi import U2Mode, optimize_U2, simplex_grid

CASES = [
    ("3 offers, grid 0.01", (90.0, 60.0, 40.0), 0.01),
    ("4 offers, grid 0.02", (90.0, 70.0, 55.0, 40.0), 0.02),
    ("5 offers, grid 0.05", (95.0, 80.0, 65.0, 50.0, 35.0), 0.05),
]


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def bench_batch(repeat):
    rows = []
    for label, offers, step in CASES:
        game = GameSpec(100.0, offers, RegretSpec.sinh(10.0))
        pts = simplex_grid(game.size, step)
        timing = {}
        results = {}
        for name in kernels.BACKENDS:
            results[name] = max_delta_R_batch(game, pts, backend=name)
            timing[name] = best_of(lambda: max_delta_R_batch(game, pts, backend=name), repeat)
        if "cython" in results:
            np.testing.assert_allclose(results["python"][0], results["cython"][0], rtol=1e-12, atol=1e-12)
        rows.append((f"{label} ({len(pts)} points)", timing))
    return rows


def bench_solver(repeat):
    game = GameSpec(100.0, (70.0, 54.0, 46.0), RegretSpec.sinh(16.0))
    timing = {}
    saved = kernels.BACKEND
    try:
        for name in kernels.BACKENDS:
            kernels.BACKEND = name
            timing[name] = best_of(lambda: optimize_U2(game, 46.0, U2Mode.FULL), max(1, repeat // 2))
    finally:
        kernels.BACKEND = saved
    return [("full three-offer optimum (a_2=46)", timing)]


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)
    if "cython" not in kernels.BACKENDS:
        print("compiled kernel not built; timing the numpy fallback only")
    names = list(kernels.BACKENDS)
    print(f"{'case':<45}" + "".join(f"{n:>12}" for n in names) + ("     speedup" if len(names) > 1 else ""))
    for label, timing in bench_batch(args.repeat) + bench_solver(args.repeat):
        line = f"{label:<45}" + "".join(f"{timing[n] * 1e3:>10.2f}ms" for n in names)
        if len(names) > 1:
            line += f"{timing['python'] / timing['cython']:>11.1f}x"
        print(line)


if __name__ == "__main__":
    main()
