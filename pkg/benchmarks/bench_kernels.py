#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallbacks.

Runs each scan kernel on both backends (selected through the DIAGSURF_NUMBA
environment flag, which is honoured at import time) and prints a timing
table.  Counts must agree exactly between backends; this script asserts it.

Usage:
    python benchmarks/bench_kernels.py [--height-cubic 20] [--height-quartic 10]
                                       [--height-sieve 20] [--repeat 3]
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import time


def _run_one(backend: str, args) -> dict:
    env = dict(os.environ)
    env["DIAGSURF_NUMBA"] = "1" if backend == "numba" else "0"
    code = f"""
import json, time
from diagsurf import accel
from diagsurf._tables import build_cubic_tables, build_quartic_tables, build_sieve_tables

out = {{"backend": accel.backend_name()}}

tables = build_cubic_tables({args.height_cubic})
accel.cubic_scan(tables)  # warm-up / JIT
best = None
for _ in range({args.repeat}):
    t0 = time.perf_counter()
    counts = accel.cubic_scan(tables)
    dt = time.perf_counter() - t0
    best = dt if best is None or dt < best else best
out["cubic"] = {{"seconds": best, "counts": list(counts)}}

tables = build_quartic_tables({args.height_quartic})
accel.quartic_scan(tables)
best = None
for _ in range({args.repeat}):
    t0 = time.perf_counter()
    counts = accel.quartic_scan(tables)
    dt = time.perf_counter() - t0
    best = dt if best is None or dt < best else best
out["quartic"] = {{"seconds": best, "counts": list(counts)}}

tables = build_sieve_tables({args.height_sieve}, 10)
accel.sieve_counts(tables)
best = None
for _ in range({args.repeat}):
    t0 = time.perf_counter()
    tot, fail = accel.sieve_counts(tables)
    dt = time.perf_counter() - t0
    best = dt if best is None or dt < best else best
out["sieve"] = {{"seconds": best, "counts": [int(tot.sum()), int(fail.sum())]}}

print(json.dumps(out))
"""
    proc = subprocess.run(
        [sys.executable, "-c", code], env=env, capture_output=True, text=True
    )
    if proc.returncode != 0:
        raise RuntimeError(f"{backend} run failed:\n{proc.stderr}")
    return json.loads(proc.stdout.strip().splitlines()[-1])


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--height-cubic", type=int, default=20)
    ap.add_argument("--height-quartic", type=int, default=10)
    ap.add_argument("--height-sieve", type=int, default=20)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    t0 = time.perf_counter()
    results = {b: _run_one(b, args) for b in ("numba", "numpy")}
    print(f"(total wall time {time.perf_counter() - t0:.1f}s)\n")
    print(f"{'kernel':<10} {'numba (s)':>12} {'numpy (s)':>12} {'speedup':>9}")
    for kernel in ("cubic", "quartic", "sieve"):
        nb = results["numba"][kernel]
        np_ = results["numpy"][kernel]
        if nb["counts"] != np_["counts"]:
            raise AssertionError(
                f"{kernel}: backend counts disagree: {nb['counts']} vs {np_['counts']}"
            )
        speed = np_["seconds"] / nb["seconds"] if nb["seconds"] else float("inf")
        print(
            f"{kernel:<10} {nb['seconds']:>12.4f} {np_['seconds']:>12.4f} {speed:>8.1f}x"
        )
    print("\ncounts agree between backends for every kernel")
    return 0


if __name__ == "__main__":
    sys.exit(main())
