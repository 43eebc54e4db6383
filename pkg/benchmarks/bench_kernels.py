#!/usr/bin/env python3
"""Benchmark the hot kernels: compiled extension vs numpy fallback.

Usage: python benchmarks/bench_kernels.py [--repeat 3]
"""

import argparse
import os
import time

import numpy as np

from dunklriesz._backend import available_backends, get_impl
from dunklriesz.kernel import rank1_reference_rule
from dunklriesz.rootsys import ReflectionSetup, compute_constants


def reference(setup, nmu):
    ts, ws = [], []
    for g in setup.multiplicities:
        t, w = rank1_reference_rule(g, nmu)
        ts.append(t)
        ws.append(w)
    return ts, ws


def workloads():
    rng = np.random.default_rng(7)
    out = []
    for label, mults, npts, nmu in [
        ("kernel sweep 1-D (gamma=0.5)", (0.5,), 20000, 64),
        ("kernel sweep 1-D (gamma=2.5)", (2.5,), 20000, 64),
        ("kernel sweep 2-D", (0.5, 1.0), 20000, 24),
        ("kernel sweep 2-D dense mu", (0.5, 1.0), 4000, 48),
    ]:
        setup = ReflectionSetup(len(mults), mults)
        c = compute_constants(setup)
        n = setup.dimension
        y = rng.uniform(0.8, 1.5, size=n)
        X = rng.uniform(2.0, 8.0, size=(npts, n))
        ts, ws = reference(setup, nmu)
        out.append((label, setup, c, X, y, ts, ws))
    return out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = available_backends()
    print(f"available backends: {', '.join(backends)}")
    rows = []
    for label, setup, c, X, y, ts, ws in workloads():
        times = {}
        base = None
        for name in backends:
            impl = get_impl(name)
            best = float("inf")
            for _ in range(args.repeat):
                t0 = time.perf_counter()
                val = impl.kernel_many_x(setup.multiplicities, c.p_k,
                                         c.riesz_norm, 0, X, y, ts, ws)
                best = min(best, time.perf_counter() - t0)
            times[name] = best
            if base is None:
                base = val
            else:
                err = float(np.max(np.abs(val - base) / (np.abs(base) + 1e-300)))
                assert err < 1e-12, f"backend mismatch: {err}"
        rows.append((label, times))
    width = max(len(r[0]) for r in rows)
    header = f"{'workload':<{width}}  " + "  ".join(f"{b:>10}" for b in backends)
    if len(backends) > 1:
        header += f"  {'speedup':>8}"
    print(header)
    for label, times in rows:
        line = f"{label:<{width}}  " + "  ".join(
            f"{times[b] * 1e3:>8.1f}ms" for b in backends)
        if len(backends) > 1:
            line += f"  {times['python'] / times['compiled']:>7.1f}x"
        print(line)


if __name__ == "__main__":
    main()
