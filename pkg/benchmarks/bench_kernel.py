"""Compiled vs numpy pivot kernel on the Table 1 fixed-horizon LPs.

    python3 benchmarks/bench_kernel.py [--horizons 26,50,100,128] [--repeat 3]

Prints one row per (horizon, rule) with the best-of-``repeat`` wall time for
each kernel and the speed-up. Both kernels must agree on status and cost; a
mismatch aborts the run. Pivot counts are shown per kernel because long
degenerate Bland runs can break near-ties differently in the two kernels.
"""

import argparse
import time

import numpy as np

from vhrvd.lp import _backend, solve
from vhrvd.scenario import load_scenario


def best_time(fn, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--horizons", default="26,50,100,128")
    ap.add_argument("--rules", default="dantzig,bland")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    if _backend.run_pivots_c is None:
        raise SystemExit("compiled kernel not built; run `pip install -e . --no-build-isolation`")
    problem = load_scenario("table1").build()
    print(f"{'N':>4} {'rule':>8} {'piv_c':>6} {'piv_py':>6} {'cython_ms':>10} {'python_ms':>10} {'speedup':>8}")
    for N in (int(x) for x in args.horizons.split(",")):
        lp = problem.build_lp(N)
        for rule in args.rules.split(","):
            times, sols = {}, {}
            for kernel in ("cython", "python"):
                _backend.use(kernel)
                times[kernel], sols[kernel] = best_time(lambda: solve(lp, rule=rule), args.repeat)
            a, b = sols["cython"], sols["python"]
            if a.status is not b.status or (
                    a.optimal and not np.isclose(a.objective, b.objective, rtol=1e-9, atol=1e-12)):
                raise SystemExit(f"kernels disagree at N={N}, rule={rule}")
            print(f"{N:>4} {rule:>8} {a.iterations:>6} {b.iterations:>6} {1e3 * times['cython']:>10.1f} "
                  f"{1e3 * times['python']:>10.1f} {times['python'] / times['cython']:>7.1f}x")
    _backend.use("cython")


if __name__ == "__main__":
    main()
