"""Seeded planted instances: a decorated subdivided hex grid plus wired apices.

The base is H_R with a light random subdivision and planar decorations at
interior corners (pendant paths, one chord or one two-legged vertex inside
a cell).  Each planted apex is joined to a corner of every cell on a coarse
lattice, so it touches every zone core and many disjoint blocks; with
``wiring="local"`` it is joined only around one random cell instead, which
leaves distant zones flat.  Vertex ids are shuffled so that search code
cannot lean on the construction order.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .constants import largest_q_fitting, radius_for
from .graph import DomainError, Graph
from .hexgrid import HexSubdivision, build_hexgrid, hex_distance, subdivision_of_grid

LATTICE_SPACING = 5
LOCAL_RADIUS = 1
WIRINGS = ("lattice", "local")


@dataclass(frozen=True)
class PlantedInstance:
    graph: Graph
    apices: frozenset[int]
    radius: int
    q: int | None
    grid: HexSubdivision  # the planted base grid, in final ids


def base_radius(n: int, k: int, mode: str) -> tuple[int, int | None]:
    """Grid radius (and zone-lattice ``q`` where defined) for an ``n``-vertex instance."""
    mode = _mode(mode)
    if k <= 1:
        r = math.isqrt(max(0, (n - k) // 6))
        if r < 1:
            raise DomainError(f"n={n} is too small for any hex grid")
        return r, None
    if mode == "paper":
        r = radius_for(k)
        if 6 * r * r + k > n:
            raise DomainError(f"paper constants at k={k} need n >= {6 * r * r + k}")
        return r, None
    q = largest_q_fitting(n - k, k)
    if q is None:
        raise DomainError(f"n={n} is too small for a zone of radius {2 * k + 5}")
    return (q - 1) * (4 * k + 9) + (2 * k + 5), q


def _mode(mode: str) -> str:
    aliases = {"paper": "paper", "paper-constants": "paper", "reduced": "reduced", "reduced-constants": "reduced"}
    if mode not in aliases:
        raise DomainError(f"unknown constants mode {mode!r}")
    return aliases[mode]


def plant(n: int, k: int, seed: int, mode: str = "reduced", wiring: str = "lattice") -> PlantedInstance:
    if k < 0:
        raise DomainError("k must be nonnegative")
    if wiring not in WIRINGS:
        raise DomainError(f"wiring must be one of {WIRINGS}")
    rng = random.Random(seed)
    R, q = base_radius(n, k, mode)
    grid = build_hexgrid(R)
    spare = n - 6 * R * R - k

    # decorations at interior corners only, so outer-circle degrees stay at two
    interior_cells = [c for c in grid.cells if hex_distance(c) <= R - 3]
    n_decor = min(spare // 3, max(1, len(grid.cells) // 40)) if interior_cells else 0
    plan = []
    for cell in rng.sample(interior_cells, min(n_decor, len(interior_cells))):
        kind = rng.choice(("pendant", "chord", "bridge"))
        i = rng.randrange(6)
        length = rng.randint(1, 2)
        j = (i + rng.choice((2, 3))) % 6
        plan.append((cell, kind, i, j, length))
    used = sum(p[4] if p[1] == "pendant" else p[1] == "bridge" for p in plan)
    spare -= used

    edges = list(grid.edges)
    rng.shuffle(edges)
    lengths: dict[tuple[int, int], int] = {}
    for t in range(spare):
        e = edges[t % len(edges)]
        lengths[e] = lengths.get(e, 1) + 1
    host, sub = subdivision_of_grid(grid, lengths)
    next_id = host.n
    extra_edges: list[tuple[int, int]] = []
    for cell, kind, i, j, length in plan:
        corners = grid.corners(cell)
        if kind == "pendant":
            prev = corners[i]
            for _ in range(length):
                extra_edges.append((prev, next_id))
                prev = next_id
                next_id += 1
        elif kind == "chord":
            extra_edges.append((corners[i], corners[j]))
        else:
            extra_edges += [(corners[i], next_id), (corners[j], next_id)]
            next_id += 1

    apices = []
    for a in range(k):
        apex = next_id
        next_id += 1
        apices.append(apex)
        if wiring == "local":
            inner = [c for c in grid.cells if hex_distance(c) <= max(0, R - 1 - LOCAL_RADIUS)]
            hub = rng.choice(inner)
            targets = [c for c in grid.cells if hex_distance(c, hub) <= LOCAL_RADIUS]
        else:
            offset = (rng.randrange(LATTICE_SPACING), rng.randrange(LATTICE_SPACING))
            targets = [
                c for c in grid.cells
                if (c[0] - offset[0]) % LATTICE_SPACING == 0 and (c[1] - offset[1]) % LATTICE_SPACING == 0
            ]
        for cell in targets:
            extra_edges.append((apex, grid.corners(cell)[rng.randrange(6)]))
    g = host.with_edges(extra_edges, range(host.n, next_id))
    assert g.n == n, (g.n, n)

    perm = list(range(g.n))
    rng.shuffle(perm)
    relabel = dict(zip(sorted(g.vertices()), perm))
    out = Graph(relabel.values(), [(relabel[a], relabel[b]) for a, b in g.edges()])
    sub = HexSubdivision(
        sub.grid,
        {v: relabel[h] for v, h in sub.branch_map.items()},
        {e: tuple(relabel[x] for x in p) for e, p in sub.path_map.items()},
    )
    return PlantedInstance(out, frozenset(relabel[a] for a in apices), R, q, sub)


def generate_planted_instance(
    n: int, k: int, seed: int, mode: str = "reduced", wiring: str = "lattice"
) -> tuple[Graph, frozenset[int]]:
    """Graph and a known apex set of size ``k`` (valid, not necessarily minimum)."""
    inst = plant(n, k, seed, mode, wiring)
    return inst.graph, inst.apices
