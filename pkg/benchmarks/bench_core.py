#!/usr/bin/env python3
"""Benchmark the compiled RK4 sweep kernel against the pure-Python fallback.

Times the raw kernel on a representative tabulated grid and the end-to-end
eigenvalue search with each backend, then prints the speedup.  The compiled
core is optional; if it is missing only the pure numbers are shown.

Usage: python benchmarks/bench_core.py [--steps N] [--repeats K]
"""

import argparse
import math
import time

import numpy as np


def grid_for(a1, terms, n_steps):
    r = np.concatenate([
        np.geomspace(0.05, 0.5, n_steps // 4 + 1),
        np.linspace(0.5, 10.0, n_steps - n_steps // 4 + 1)[1:],
    ])
    def w(x):
        out = a1 * x * x
        for lam, alpha in terms:
            out = out + lam * x ** (-alpha)
        return out
    mid = 0.5 * (r[:-1] + r[1:])
    return w(r), w(mid), np.diff(r)


def time_kernel(sweep, wn, wm, h, repeats):
    best = math.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        sweep(wn, wm, h, 5.0, 1.0, 7.5, True)
        best = min(best, time.perf_counter() - t0)
    return best


def time_shoot(repeats):
    from spikevar.hamiltonian import PotentialSpec
    from spikevar.oracle import shoot_eigenvalue

    v = PotentialSpec(a1=1.0, terms=((1.0, 4.0), (1.0, 6.0)))
    best = math.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        res = shoot_eigenvalue(v, 0, tol=1e-6)
        best = min(best, time.perf_counter() - t0)
    return best, res.energy


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--steps", type=int, default=20000)
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args()

    wn, wm, h = grid_for(1.0, ((1.0, 4.0), (1.0, 6.0)), args.steps)

    from spikevar import _pysweep

    rows = []
    t_pure = time_kernel(_pysweep.rk4_sweep, wn, wm, h, args.repeats)
    rows.append(("rk4_sweep pure", t_pure, 1.0))
    try:
        from spikevar import _core
    except ImportError:
        _core = None
    if _core is not None:
        t_comp = time_kernel(_core.rk4_sweep, wn, wm, h, args.repeats)
        rows.append(("rk4_sweep compiled", t_comp, t_pure / t_comp))
        a = _core.rk4_sweep(wn, wm, h, 5.0, 1.0, 7.5, True)
        b = _pysweep.rk4_sweep(wn, wm, h, 5.0, 1.0, 7.5, True)
        agree = abs(a[0] - b[0]) <= 1e-13 * max(1.0, abs(b[0])) and a[2] == b[2]
    else:
        agree = None

    import spikevar.oracle as oracle_mod

    t_shoot, energy = time_shoot(max(1, args.repeats // 2))
    rows.append((f"shoot_eigenvalue ({oracle_mod.BACKEND})", t_shoot, None))

    print(f"grid steps: {args.steps}, repeats: {args.repeats}")
    print(f"{'benchmark':<32} {'best time':>12} {'speedup':>9}")
    for name, t, speed in rows:
        s = f"{speed:8.1f}x" if speed else "        -"
        print(f"{name:<32} {t * 1e3:>10.3f}ms {s}")
    if agree is not None:
        print(f"kernel agreement (value and node count): {'ok' if agree else 'MISMATCH'}")
    print(f"shoot_eigenvalue result: {energy:.8f} (exact 5.0)")


if __name__ == "__main__":
    main()
