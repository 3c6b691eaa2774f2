"""Compare the exact solver and the pipeline with brute force on random graphs.

Useful for longer soak runs than the test suite does; exits nonzero on the
first disagreement and prints the offending edge list.
"""

from __future__ import annotations

import argparse
import random
import sys

import networkx as nx

from kapex.graph import Graph
from kapex.pipeline import PipelineConfig, run_pipeline
from kapex.solver import brute_force_oracle, solve_exact


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=5000)
    ap.add_argument("--max-n", type=int, default=12)
    ap.add_argument("--max-k", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    reduced = PipelineConfig(mode="phase1+2", constants="reduced")
    feasible = 0
    for i in range(args.count):
        n = rng.randint(1, args.max_n)
        h = nx.gnp_random_graph(n, rng.random(), seed=rng.randrange(2**31))
        g = Graph(h.nodes, h.edges)
        k = rng.randint(0, args.max_k)
        want = brute_force_oracle(g, k).feasible
        got = [solve_exact(g, k).feasible, run_pipeline(g, k).feasible, run_pipeline(g, k, reduced).feasible]
        if any(x != want for x in got):
            print(f"disagreement at case {i}: k={k} oracle={want} got={got}\n{g.edges()}")
            return 1
        feasible += want
    print(f"{args.count} graphs agree ({feasible} feasible)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
