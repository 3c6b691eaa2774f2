"""Blocks, well-attached vertices and Reduction B.

A vertex is tested against one fixed family of pairwise disjoint blocks
(H_{k+3} balls of the zone union).  A witness found this way is a genuine
witness, so forcing stays sound; a vertex whose paths only reach blocks
outside the family is not reported.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Iterable
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_flow

from .constants import block_count_d
from .graph import DomainError, Graph
from .hexgrid import Cell, HexSubdivision, circle_index, hex_distance, ring, spiral, validate_hex_subdivision
from .zones import ZoneLayout


@dataclass(frozen=True, eq=False)
class Block:
    center: Cell
    radius: int
    cells: frozenset[Cell]
    vertices: frozenset[int]
    inner: frozenset[int]
    outer_circle: frozenset[int]

    def subdivision(self, layout: ZoneLayout) -> HexSubdivision:
        return layout.host.restrict(self.center, self.radius)

    def to_json(self) -> dict:
        return {"center": list(self.center), "radius": self.radius}


@dataclass(frozen=True)
class WellAttachedWitness:
    vertex: int
    blocks: tuple[Block, ...]
    paths: tuple[tuple[int, ...], ...]

    def to_json(self) -> dict:
        return {
            "vertex": self.vertex,
            "blocks": [b.to_json() for b in self.blocks],
            "paths": [list(p) for p in self.paths],
        }


def make_block(layout: ZoneLayout, center: Cell, radius: int) -> Block:
    host, grid = layout.host, layout.host.grid
    cells = spiral(center, radius - 1)
    outer = set()
    for e in grid.edges_of_cells(ring(center, radius - 1)):
        if all(circle_index(grid.keys[x], center) == radius for x in e):
            outer.update(host.path_map[e])
    vs = frozenset(host.host_vertices_of_cells(cells))
    return Block(center, radius, frozenset(cells), vs, vs - outer, frozenset(outer))


def enumerate_disjoint_blocks(layout: ZoneLayout, k: int | None = None) -> list[Block]:
    """A maximal family of vertex-disjoint H_{k+3} balls inside the zone union.

    Centres on the close-packing lattice through the origin come first, in
    spiral order; any remaining room is then filled greedily in the same order.
    With the full constants the family is asserted to hold at least
    ``(k+1)^2 + d + 1`` blocks.
    """
    k = layout.k if k is None else k
    radius = k + 3
    gap = 2 * radius  # centre distance at which two balls share no vertex
    zone_cells = set().union(*(z.cells for z in layout.zones))
    fits = [c for c in layout.host.grid.cells if all(x in zone_cells for x in spiral(c, radius - 1))]
    a = radius

    def on_lattice(c: Cell) -> bool:
        # integer combination of (2a, -a) and (a, a)
        return (c[0] - c[1]) % (3 * a) == 0 and (c[0] + 2 * c[1]) % (3 * a) == 0

    chosen: list[Cell] = []

    def free(c: Cell) -> bool:
        return all(hex_distance(c, o) >= gap for o in chosen)

    for c in fits:
        if on_lattice(c) and free(c):
            chosen.append(c)
    for c in fits:
        if free(c):
            chosen.append(c)
    blocks = [make_block(layout, c, radius) for c in chosen]
    if layout.constants.trusted:
        need = (k + 1) ** 2 + block_count_d(k) + 1
        assert len(blocks) >= need, (len(blocks), need)
    return blocks


# -- path systems -------------------------------------------------------------------


class AttachmentNetwork:
    """Vertex-split flow network for path systems that meet only at their start.

    Node ``2i`` is the entry and ``2i + 1`` the exit of the ``i``-th vertex;
    entry-to-exit arcs exist only for permitted interior vertices, and a
    target's entry feeds its group node, which feeds the sink with unit
    capacity.  The matrix is built once per graph; each query only edits
    capacities and runs a max-flow.
    """

    def __init__(self, g: Graph, forbidden_interior: Iterable[int], target_group: dict[int, int]) -> None:
        forbidden = set(forbidden_interior)
        self.vertices = g.sorted_vertices()
        self.index = {v: i for i, v in enumerate(self.vertices)}
        self.target_group = dict(target_group)
        groups = sorted(set(self.target_group.values()))
        n = len(self.vertices)
        self.group_node = {grp: 2 * n + j for j, grp in enumerate(groups)}
        self.sink = 2 * n + len(groups)
        rows, cols = [], []
        for i, u in enumerate(self.vertices):
            for w in g.neighbors(u):
                rows.append(2 * i + 1)
                cols.append(2 * self.index[w])
            if u not in forbidden and u not in self.target_group:
                rows.append(2 * i)
                cols.append(2 * i + 1)
        for t, grp in self.target_group.items():
            rows.append(2 * self.index[t])
            cols.append(self.group_node[grp])
        for node in self.group_node.values():
            rows.append(node)
            cols.append(self.sink)
        size = self.sink + 1
        m = csr_matrix((np.ones(len(rows), dtype=np.int32), (rows, cols)), shape=(size, size))
        m.sort_indices()
        self.matrix = m

    def _position(self, a: int, b: int) -> int | None:
        lo, hi = self.matrix.indptr[a], self.matrix.indptr[a + 1]
        j = lo + int(np.searchsorted(self.matrix.indices[lo:hi], b))
        return j if j < hi and self.matrix.indices[j] == b else None

    def paths_from(self, x: int, excluded_groups: Iterable[int] = ()) -> list[tuple[int, ...]]:
        """A maximum path system from ``x``; paths are listed by their second vertex."""
        n = len(self.vertices)
        i = self.index[x]
        data = self.matrix.data.copy()
        blocked = [(2 * i, 2 * i + 1)]
        if x in self.target_group:
            blocked.append((2 * i, self.group_node[self.target_group[x]]))
        blocked += [(self.group_node[grp], self.sink) for grp in excluded_groups if grp in self.group_node]
        for a, b in blocked:
            pos = self._position(a, b)
            if pos is not None:
                data[pos] = 0
        m = csr_matrix((data, self.matrix.indices, self.matrix.indptr), shape=self.matrix.shape)
        result = maximum_flow(m, 2 * i + 1, self.sink, method="dinic")
        if result.flow_value == 0:
            return []
        flow = result.flow.tocoo()
        pos = flow.data > 0
        out: dict[int, list[int]] = {}
        for a, b in zip(flow.row[pos].tolist(), flow.col[pos].tolist()):
            out.setdefault(a, []).append(b)
        for succ in out.values():
            succ.sort()
        paths = []
        for first in list(out[2 * i + 1]):
            path = [x]
            node = first
            while node != self.sink:
                if node < 2 * n and node % 2 == 0:
                    path.append(self.vertices[node // 2])
                node = out[node].pop(0)
            paths.append(tuple(path))
        return paths


def attachment_paths(
    g: Graph,
    x: int,
    forbidden_interior: Iterable[int],
    target_group: dict[int, int],
    limit: int | None = None,
) -> list[tuple[int, ...]]:
    """Maximum family of paths from ``x`` that pairwise meet only at ``x``.

    Each path ends at the first vertex of ``target_group`` it reaches, no two
    paths end in the same group, and interior vertices avoid
    ``forbidden_interior`` and all targets.
    """
    paths = AttachmentNetwork(g, forbidden_interior, target_group).paths_from(x)
    return paths if limit is None else paths[:limit]


class _Context:
    """Per-graph lookups shared by all well-attachedness tests."""

    def __init__(self, g: Graph, layout: ZoneLayout, blocks: list[Block]) -> None:
        self.blocks = blocks
        self.target_group: dict[int, int] = {}
        self.block_of: dict[int, int] = {}
        for i, b in enumerate(blocks):
            for v in b.vertices:
                self.block_of[v] = i
            for v in b.inner:
                self.target_group[v] = i
        r = layout.r_vertices
        self.comp_of: dict[int, int] = {}
        self.comp_groups: list[set[int]] = []
        for s in g.sorted_vertices():
            if s in r or s in self.comp_of:
                continue
            cid = len(self.comp_groups)
            groups: set[int] = set()
            self.comp_of[s] = cid
            queue = deque([s])
            while queue:
                u = queue.popleft()
                for w in g.neighbors(u):
                    if w in r:
                        if w in self.target_group:
                            groups.add(self.target_group[w])
                    elif w not in self.comp_of:
                        self.comp_of[w] = cid
                        queue.append(w)
            self.comp_groups.append(groups)
        self.network = AttachmentNetwork(g, r, self.target_group)

    def may_attach(self, g: Graph, x: int, need: int) -> bool:
        """Necessary condition: ``need`` usable first steps and ``need`` reachable blocks."""
        own = self.block_of.get(x)
        steps = 0
        groups: set[int] = set()
        for w in g.neighbors(x):
            grp = self.target_group.get(w)
            if grp is not None:
                if grp != own:
                    steps += 1
                    groups.add(grp)
            elif w in self.comp_of:
                steps += 1
                groups |= self.comp_groups[self.comp_of[w]]
        groups.discard(own)
        return steps >= need and len(groups) >= need


def is_well_attached(
    g: Graph,
    layout: ZoneLayout,
    x: int,
    k: int,
    blocks: list[Block] | None = None,
    context: _Context | None = None,
) -> WellAttachedWitness | None:
    if x not in g:
        raise DomainError(f"vertex {x} not in graph")
    if g.degree(x) < k + 2:
        return None
    if context is None:
        blocks = enumerate_disjoint_blocks(layout, k) if blocks is None else blocks
        context = _Context(g, layout, blocks)
    if not context.may_attach(g, x, k + 2):
        return None
    own = context.block_of.get(x)
    paths = context.network.paths_from(x, () if own is None else (own,))[: k + 2]
    if len(paths) < k + 2:
        return None
    return WellAttachedWitness(x, tuple(context.blocks[context.target_group[p[-1]]] for p in paths), tuple(paths))


def find_well_attached(
    g: Graph,
    layout: ZoneLayout,
    k: int,
    blocks: list[Block] | None = None,
    threads: int = 1,
) -> dict[int, WellAttachedWitness]:
    """Witnesses for every well-attached vertex, keyed by vertex, in increasing order."""
    blocks = enumerate_disjoint_blocks(layout, k) if blocks is None else blocks
    context = _Context(g, layout, blocks)
    candidates = [v for v in g.sorted_vertices() if g.degree(v) >= k + 2 and context.may_attach(g, v, k + 2)]

    def test(v: int) -> WellAttachedWitness | None:
        return is_well_attached(g, layout, v, k, context=context)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(test, candidates))
    else:
        results = [test(v) for v in candidates]
    return {v: w for v, w in zip(candidates, results) if w is not None}


def verify_witness(g: Graph, layout: ZoneLayout, w: WellAttachedWitness, k: int) -> list[str]:
    """All violated witness conditions, checked from scratch (empty when valid)."""
    problems = []
    x = w.vertex
    if x not in g:
        return [f"vertex {x} not in graph"]
    if len(w.blocks) != k + 2 or len(w.paths) != k + 2:
        problems.append(f"need {k + 2} blocks and paths, got {len(w.blocks)} and {len(w.paths)}")
    zone_cells = set().union(*(z.cells for z in layout.zones))
    for i, b in enumerate(w.blocks):
        if b.radius != k + 3:
            problems.append(f"block {i} has radius {b.radius}")
        if not b.cells <= zone_cells:
            problems.append(f"block {i} leaves the zone union")
            continue
        errs = validate_hex_subdivision(g, b.subdivision(layout))
        if errs:
            problems.append(f"block {i} is not a grid subdivision: {errs[0]}")
        if x in b.vertices:
            problems.append(f"block {i} contains the vertex itself")
    for i in range(len(w.blocks)):
        for j in range(i + 1, len(w.blocks)):
            if w.blocks[i].vertices & w.blocks[j].vertices:
                problems.append(f"blocks {i} and {j} intersect")
    interiors: set[int] = set()
    ends: set[int] = set()
    for i, (p, b) in enumerate(zip(w.paths, w.blocks)):
        if len(p) < 2 or p[0] != x:
            problems.append(f"path {i} does not start at the vertex")
            continue
        if len(set(p)) != len(p):
            problems.append(f"path {i} repeats a vertex")
        if not all(g.has_edge(a, c) for a, c in zip(p, p[1:])):
            problems.append(f"path {i} uses a non-edge")
        if p[-1] not in b.inner:
            problems.append(f"path {i} does not end at an inner vertex of its block")
        inner = set(p[1:-1])
        if inner & layout.r_vertices:
            problems.append(f"path {i} runs through the zone union")
        if (inner | {p[-1]}) & (interiors | ends):
            problems.append(f"path {i} meets another path away from the vertex")
        interiors |= inner
        ends.add(p[-1])
    return problems


def reduction_b(
    g: Graph,
    layout: ZoneLayout,
    u: Iterable[int] | dict[int, WellAttachedWitness],
    k: int,
) -> Graph:
    """Delete well-attached vertices; every one must carry a valid witness in ``g``.

    Pass the witnesses (a dict) to have them verified; pass bare vertices to
    have witnesses recomputed.
    """
    if isinstance(u, dict):
        for v, w in u.items():
            if w.vertex != v or verify_witness(g, layout, w, k):
                raise DomainError(f"invalid well-attached witness for {v}")
        return g.delete_vertices(u.keys())
    u = list(u)
    blocks = enumerate_disjoint_blocks(layout, k)
    for v in u:
        if is_well_attached(g, layout, v, k, blocks) is None:
            raise DomainError(f"vertex {v} is not well-attached")
    return g.delete_vertices(u)
