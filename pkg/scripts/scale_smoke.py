"""Time the pipeline on planted instances of growing size.

Prints one line per run: vertices, k, status, reductions, wall time, and
whether the certificate verifies on the original graph.
"""

from __future__ import annotations

import argparse
import time

from kapex.generate import plant
from kapex.pipeline import PipelineConfig, run_pipeline
from kapex.solver import verify_solution


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", type=int, nargs="+", default=[2460, 4500, 8000, 12000])
    ap.add_argument("--k", type=int, default=2)
    ap.add_argument("--seeds", type=int, default=2)
    ap.add_argument("--wiring", choices=("lattice", "local"), default="lattice")
    args = ap.parse_args()
    print(f"{'n':>7} {'k':>2} {'seed':>4} {'status':>14} {'A':>3} {'B':>3} {'seconds':>8} verified")
    for n in args.sizes:
        for seed in range(args.seeds):
            inst = plant(n, args.k, seed, "reduced", args.wiring)
            t = time.perf_counter()
            out = run_pipeline(inst.graph, args.k, PipelineConfig(constants="reduced"))
            dt = time.perf_counter() - t
            ok = out.feasible and verify_solution(inst.graph, out.apex_set, args.k)
            s = out.stats
            print(f"{n:>7} {args.k:>2} {seed:>4} {out.status:>14} {s.reductions_a:>3} {s.reductions_b:>3} {dt:>8.2f} {ok}")


if __name__ == "__main__":
    main()
