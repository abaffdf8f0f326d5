"""Compare the compiled kernels with the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 3] [--json]

Each workload runs on every available backend.  The outputs must agree
exactly before a timing is reported.
"""
import argparse
import json
import sys
import time

import numpy as np

from ffdensity import kernels
from ffdensity.charsums import prime_block, squarefree_block


def workloads(q):
    D3, d3 = squarefree_block(q, 3)
    D5, d5 = squarefree_block(q, 5)
    P3, p3 = prime_block(q, 3)
    P4, p4 = prime_block(q, 4)
    return {
        "chi H_3 x P_4": lambda b: kernels.chi_matrix(P4, p4, D3, d3, q, backend=b),
        "chi H_5 x P_3": lambda b: kernels.chi_matrix(D5, d5, P3, p3, q, backend=b),
        "squarefree mask n=7": lambda b: kernels.squarefree_mask(q, 7, backend=b),
        "irreducible mask n=7": lambda b: kernels.irreducible_mask(q, 7, backend=b),
    }


def best_of(fn, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser()
    ap.add_argument("--q", type=int, default=5)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args(argv)
    names = sorted(kernels.backends())
    rows = []
    for label, work in workloads(args.q).items():
        times, outs = {}, {}
        for b in names:
            times[b], outs[b] = best_of(lambda: work(b), args.repeat)
        ref = outs[names[0]]
        if not all(np.array_equal(ref, o) for o in outs.values()):
            print(f"backends disagree on {label}", file=sys.stderr)
            return 1
        row = {"workload": label, **{f"{b}_s": round(t, 5) for b, t in times.items()}}
        if "cython" in times:
            row["speedup"] = round(times["python"] / times["cython"], 1)
        rows.append(row)
    if args.json:
        print(json.dumps(rows, indent=2))
    else:
        for r in rows:
            cells = "  ".join(f"{k}={v}" for k, v in r.items() if k != "workload")
            print(f"{r['workload']:<24} {cells}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
