#!/usr/bin/env python3
"""Benchmark the RK4 flow kernel: compiled backend vs the numpy fallback.

Both backends share the same contract (advance in place, return leakage and
F-increase diagnostics), so the comparison also asserts bitwise-close
agreement on every case it times.

Usage: python3 benchmarks/bench_flow.py [--sizes 4,6,8,12] [--steps 2000]
"""

from __future__ import annotations

import argparse
import importlib
import time

import numpy as np

from isoflow import hessfn, matcore
from isoflow._kernels import _flow_py


def kernels():
    out = {"python": _flow_py.rk4_advance}
    try:
        cy = importlib.import_module("isoflow._kernels._flow_cy")
        out["cython"] = cy.rk4_advance
    except ImportError:
        pass
    return out


def time_kernel(fn, L0, mask, dt, nsteps, repeats=3):
    best = float("inf")
    final = None
    for _ in range(repeats):
        L = L0.copy()
        t0 = time.perf_counter()
        fn(L, mask, dt, nsteps)
        best = min(best, time.perf_counter() - t0)
        final = L
    return best, final


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", default="4,6,8,12",
                    help="comma-separated matrix sizes")
    ap.add_argument("--steps", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]
    ks = kernels()
    print(f"backends: {', '.join(ks)}   steps per case: {args.steps}")
    print(f"{'n':>4} {'pattern':>10} " +
          " ".join(f"{name + ' (s)':>14}" for name in ks) +
          ("  speedup" if len(ks) == 2 else ""))
    for n in sizes:
        for label, h in (("tridiag", hessfn.h_min(n)),
                         ("full", hessfn.h_max(n))):
            L0 = matcore.random_staircase(h, seed=args.seed).matrix
            mask = matcore.staircase_mask(h)
            dt = 4e-3 / max(float(np.ptp(np.linalg.eigvalsh(L0))), 1e-9)
            times, finals = {}, {}
            for name, fn in ks.items():
                times[name], finals[name] = time_kernel(
                    fn, L0, mask, dt, args.steps)
            if len(ks) == 2:
                diff = np.max(np.abs(finals["python"] - finals["cython"]))
                assert diff < 1e-12, f"backend mismatch: {diff:.3e}"
                ratio = times["python"] / times["cython"]
                tail = f"  {ratio:6.1f}x"
            else:
                tail = ""
            print(f"{n:>4} {label:>10} " +
                  " ".join(f"{times[name]:>14.4f}" for name in ks) + tail)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
