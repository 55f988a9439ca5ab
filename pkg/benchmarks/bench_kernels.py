"""Compare the compiled and pure-Python time-stepping kernels.

    python3 benchmarks/bench_kernels.py [--cells 400 1600 6400] [--repeat 3]

Each case evolves the same Plateau datum (N = 1, Dirichlet ends) to a fixed
time with both backends, reports the best wall time, steps per second and
the max difference between the two results.
"""

import argparse
import math
import time

import numpy as np

from nhpme import kernels
from nhpme.core import Grid1D, Plateau, build_initial_field


def run(mod, w0, h, m, t_end):
    w = w0.copy()
    t0 = time.perf_counter()
    status, _, steps, _ = mod.evolve(w, 0.0, t_end, h, m, 1.0, 1, 1.0, 1, 0.0, 0.4, math.inf,
                                     10 ** 9, 1e-14)
    return time.perf_counter() - t0, steps, status, w


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--cells", type=int, nargs="+", default=[400, 1600, 6400])
    p.add_argument("--m", type=float, nargs="+", default=[2.0, 2.5])
    p.add_argument("--steps", type=int, default=2000, help="approximate steps per run")
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args(argv)
    py = kernels.get_backend("python")
    try:
        cy = kernels.get_backend("cython")
    except RuntimeError:
        print("compiled kernels not built; only the Python backend is available")
        cy = None
    print(f"{'cells':>6} {'m':>4} {'steps':>6} {'python s':>9} {'cython s':>9} "
          f"{'speedup':>8} {'max diff':>9}")
    for n in args.cells:
        g = Grid1D(-20.0, 30.0, n)
        w0 = np.array(build_initial_field(Plateau(1.0, 1.0), g).values)
        for m in args.m:
            dt = py.cfl_dt(w0, g.h, m, 1.0, 0.4, math.inf, 1.0, 0.0, 1, 1)
            t_end = args.steps * dt
            best = {}
            for name, mod in (("python", py), ("cython", cy)):
                if mod is None:
                    continue
                runs = [run(mod, w0, g.h, m, t_end) for _ in range(args.repeat)]
                best[name] = min(runs, key=lambda r: r[0])
            tp, steps, _, wp = best["python"]
            if "cython" in best:
                tc, _, _, wc = best["cython"]
                diff = float(np.max(np.abs(wp - wc)))
                print(f"{n:6d} {m:4g} {steps:6d} {tp:9.4f} {tc:9.4f} {tp / tc:8.1f} {diff:9.1e}")
            else:
                print(f"{n:6d} {m:4g} {steps:6d} {tp:9.4f} {'-':>9} {'-':>8} {'-':>9}")


if __name__ == "__main__":
    main()
