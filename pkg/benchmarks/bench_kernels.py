#!/usr/bin/env python3
"""Benchmark the compiled scan kernels against the numpy fallback.

Runs the exact four-point hyperbolicity scan and the subembedding
diagonal scan on identical inputs and prints a timing table.

Usage: python benchmarks/bench_kernels.py [--sizes 40,80,160]
"""

import argparse
import time

import numpy as np

from metricurv._kernels import _pykernels

try:
    from metricurv._kernels import _ckernels
except ImportError:
    _ckernels = None


def bench_delta(impl, d, repeat=3):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        impl.delta_hyp(d)
        best = min(best, time.perf_counter() - t0)
    return best


def bench_sep(impl, cases, repeat=3):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        for kind, s, d12, d23, d34, d41, tlo, thi in cases:
            impl.sep_scan(kind, s, d12, d23, d34, d41, tlo, thi)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", default="40,80,160")
    ap.add_argument("--scan-cases", type=int, default=400)
    args = ap.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    rng = np.random.default_rng(0)
    rows = []
    for n in sizes:
        pts = rng.random((n, 3)) * 5.0
        d = np.ascontiguousarray(np.linalg.norm(pts[:, None] - pts[None, :], axis=2))
        tp = bench_delta(_pykernels, d)
        tc = bench_delta(_ckernels, d) if _ckernels else float("nan")
        rows.append((f"delta_hyp n={n}", tp, tc))

    cases = []
    while len(cases) < args.scan_cases:
        x = rng.random(4) * 10.0
        d12, d23, d34, d41 = x
        d13 = abs(d12 - d23) + rng.random() * (d12 + d23 - abs(d12 - d23))
        tlo = max(d13, abs(d12 - d23), abs(d34 - d41))
        thi = min(d12 + d23, d34 + d41)
        if thi <= tlo:
            continue
        kind = int(rng.integers(0, 2))
        cases.append((kind, 1.0 if kind else 0.0, d12, d23, d34, d41, tlo, thi))
    tp = bench_sep(_pykernels, cases)
    tc = bench_sep(_ckernels, cases) if _ckernels else float("nan")
    rows.append((f"sep_scan x{args.scan_cases}", tp, tc))

    print(f"{'kernel':24s} {'python':>10s} {'compiled':>10s} {'speedup':>8s}")
    for name, tp, tc in rows:
        speed = tp / tc if tc == tc and tc > 0 else float("nan")
        print(f"{name:24s} {tp * 1e3:9.2f}ms {tc * 1e3:9.2f}ms {speed:7.1f}x")
    if _ckernels is None:
        print("compiled extension not available; fallback only")


if __name__ == "__main__":
    main()
