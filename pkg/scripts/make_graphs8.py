"""Write every unlabeled graph on 8 vertices (12346 of them) as graph6.

Each 8-vertex graph is a 7-vertex graph plus one vertex of minimum degree,
so extending the networkx atlas by such a vertex reaches every class; the
duplicates are removed by hashing and pairwise isomorphism tests.
"""

from __future__ import annotations

import argparse
from itertools import combinations
from pathlib import Path

import networkx as nx

EXPECTED = 12346


def graphs_on_8() -> list[nx.Graph]:
    buckets: dict[tuple, list[nx.Graph]] = {}
    for base in nx.graph_atlas_g():
        if base.number_of_nodes() != 7:
            continue
        degs = dict(base.degree())
        for size in range(8):
            for nbrs in combinations(range(7), size):
                # the new vertex must have minimum degree in the extended graph
                if any(degs[v] + (v in nbrs) < size for v in range(7)):
                    continue
                g = base.copy()
                g.add_node(7)
                g.add_edges_from((7, v) for v in nbrs)
                key = (tuple(sorted(d for _, d in g.degree())), nx.weisfeiler_lehman_graph_hash(g, iterations=3))
                bucket = buckets.setdefault(key, [])
                if not any(nx.is_isomorphic(g, h) for h in bucket):
                    bucket.append(g)
    return [g for bucket in buckets.values() for g in bucket]


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("out", type=Path, nargs="?", default=Path(__file__).parents[1] / "tests/data/graphs8.g6")
    args = parser.parse_args()
    graphs = graphs_on_8()
    if len(graphs) != EXPECTED:
        raise SystemExit(f"generated {len(graphs)} classes, expected {EXPECTED}")
    lines = sorted(nx.to_graph6_bytes(g, header=False).decode().strip() for g in graphs)
    args.out.write_text("\n".join(lines) + "\n")
    print(f"wrote {len(lines)} graphs to {args.out}")


if __name__ == "__main__":
    main()
