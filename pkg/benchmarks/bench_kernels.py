"""Compare the compiled and numpy tree kernels.

    python benchmarks/bench_kernels.py [--repeat 5]

Times one Laplacian step, the per-branch horocycle sums and the full
Laplacian tower used by the cone identity, and checks both backends agree.
"""
import argparse
import json
import timeit

import numpy as np

from genmvp import kernels
from genmvp import tree_laplace as tl

CASES = [(2, 20), (3, 12), (5, 8)]


def tower(num, q, R, K, backend):
    for _ in range(K):
        num = kernels.laplacian_step(num, q, R, backend)
        R -= 1
    return num


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    backends = ["python"] + (["cython"] if kernels.BACKEND == "cython" else [])
    rows = []
    for q, R in CASES:
        f = tl.make_random(q, R, 0)
        outs = {b: kernels.laplacian_step(f.num, q, R, b) for b in backends}
        if len(outs) == 2:
            assert np.array_equal(outs["python"], outs["cython"])
        for b in backends:
            step = min(timeit.repeat(lambda: kernels.laplacian_step(f.num, q, R, b),
                                     number=1, repeat=args.repeat))
            sums = min(timeit.repeat(lambda: kernels.branch_sums(f.num, q, R, R, b),
                                     number=1, repeat=args.repeat))
            tow = min(timeit.repeat(lambda: tower(f.num, q, R, R // 2, b),
                                    number=1, repeat=args.repeat))
            rows.append({"q": q, "R": R, "vertices": f.vertex_count, "backend": b,
                         "step_ms": round(step * 1e3, 2), "branch_sums_ms": round(sums * 1e3, 2),
                         "tower_ms": round(tow * 1e3, 2)})
    for r in rows:
        print(json.dumps(r))
    if len(backends) == 2:
        for q, R in CASES:
            py, cy = (next(r for r in rows if (r["q"], r["R"], r["backend"]) == (q, R, b))
                      for b in backends)
            print(f"q={q} R={R}: step speedup {py['step_ms'] / cy['step_ms']:.1f}x, "
                  f"tower speedup {py['tower_ms'] / cy['tower_ms']:.1f}x")


if __name__ == "__main__":
    main()
