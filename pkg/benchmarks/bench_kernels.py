#!/usr/bin/env python3
"""Throughput comparison of the numba and numpy update kernels.

Runs the same conservative update on the real gated-junction geometry at
a few resolutions and reports wall time per step for each backend.
Numba timings exclude the first (compilation) call.
"""

import argparse
import time

import numpy as np

from hydrogate.oracle import build_grid, velocity_field
from hydrogate.oracle import kernels
from hydrogate.oracle.solver import _run_dt
from hydrogate.params import SystemParameters


def _setup(cells_across):
    p = SystemParameters()
    g = build_grid(p, cells_across)
    vf = velocity_field(p, g, "ON")
    fields = {"ON": vf, "OFF": velocity_field(p, g, "OFF")}
    dt = _run_dt(fields, p.D, g)
    c = np.zeros_like(g.fluid, dtype=float)
    rng = np.random.default_rng(0)
    c[g.fluid] = rng.random(int(g.fluid.sum()))
    return p, g, vf, c, dt


def _time_backend(fn, p, g, vf, c, dt, steps):
    work = c.copy()
    # warm-up: triggers jit compilation for the numba backend
    fn(work, g.fluid, vf.u, vf.v, vf.bcx_kind, vf.bcx_val,
       vf.bcy_kind, vf.bcy_val, g.dx, dt, p.D)
    t0 = time.perf_counter()
    for _ in range(steps):
        work, _, _ = fn(work, g.fluid, vf.u, vf.v, vf.bcx_kind, vf.bcx_val,
                        vf.bcy_kind, vf.bcy_val, g.dx, dt, p.D)
    return (time.perf_counter() - t0) / steps, work


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--steps", type=int, default=200,
                    help="timed steps per backend (default 200)")
    ap.add_argument("--cells", type=int, nargs="+", default=[10, 20, 40],
                    help="cells across the channel width")
    args = ap.parse_args()

    backends = [("numpy", kernels.step_numpy)]
    if kernels.BACKEND == "numba":
        backends.append(("numba", kernels.step_numba))
    else:
        print("numba backend unavailable (not importable or disabled "
              "via HYDROGATE_NUMBA=0); timing numpy only")

    print(f"{'cells':>6} {'grid':>12} " +
          " ".join(f"{name + ' ms/step':>15}" for name, _ in backends) +
          ("   speedup" if len(backends) == 2 else ""))
    for cells in args.cells:
        p, g, vf, c, dt = _setup(cells)
        times = []
        results = []
        for _, fn in backends:
            per_step, out = _time_backend(fn, p, g, vf, c, dt, args.steps)
            times.append(per_step)
            results.append(out)
        if len(results) == 2:
            dev = float(np.max(np.abs(results[0] - results[1])))
            assert dev < 1e-12, f"backend disagreement: {dev}"
        row = f"{cells:>6} {g.ny:>5}x{g.nx:<6} " + \
              " ".join(f"{t * 1e3:>15.3f}" for t in times)
        if len(times) == 2:
            row += f"   {times[0] / times[1]:>6.1f}x"
        print(row)


if __name__ == "__main__":
    main()
