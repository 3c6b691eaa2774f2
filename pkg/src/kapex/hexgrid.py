"""The radial hexagonal grid H_r and its subdivisions inside host graphs.

Cells use axial coordinates ``(q, r)`` with the center cell at the origin;
H_r consists of the cells at hex distance at most ``r - 1``.  A grid vertex
is the meeting point of three mutually adjacent cells and is keyed by that
sorted cell triple, so every H_s with ``s <= r`` sits inside H_r under the
same keys.  Concentric circle ``i`` is the boundary of the ball of cells of
radius ``i - 1``; a vertex lies on circle ``1 + min distance`` of its cells.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from functools import cached_property
from typing import IO

import networkx as nx

from .graph import DomainError, Graph

Cell = tuple[int, int]
VertexKey = tuple[Cell, Cell, Cell]

DIRS: tuple[Cell, ...] = ((1, 0), (1, -1), (0, -1), (-1, 0), (-1, 1), (0, 1))


def add(a: Cell, b: Cell) -> Cell:
    return (a[0] + b[0], a[1] + b[1])


def sub(a: Cell, b: Cell) -> Cell:
    return (a[0] - b[0], a[1] - b[1])


def hex_distance(a: Cell, b: Cell = (0, 0)) -> int:
    dq, dr = a[0] - b[0], a[1] - b[1]
    return max(abs(dq), abs(dr), abs(dq + dr))


def ring(center: Cell, i: int) -> list[Cell]:
    """Cells at distance exactly ``i`` from ``center`` in cyclic order."""
    if i == 0:
        return [center]
    out = []
    cell = add(center, (-i, i))  # i steps along DIRS[4]
    for side in range(6):
        for _ in range(i):
            out.append(cell)
            cell = add(cell, DIRS[side])
    return out


def spiral(center: Cell, radius: int) -> list[Cell]:
    """Cells within ``radius`` of ``center``, ring by ring, cyclic within a ring."""
    return [c for i in range(radius + 1) for c in ring(center, i)]


def corner_keys(cell: Cell) -> list[VertexKey]:
    """The six corners of ``cell`` in cyclic order."""
    out = []
    for i in range(6):
        a = add(cell, DIRS[i])
        b = add(cell, DIRS[(i + 1) % 6])
        out.append(tuple(sorted((cell, a, b))))
    return out


def circle_index(key: VertexKey, center: Cell = (0, 0)) -> int:
    return 1 + min(hex_distance(c, center) for c in key)


def translate_key(key: VertexKey, offset: Cell) -> VertexKey:
    return tuple(sorted(add(c, offset) for c in key))


@dataclass(frozen=True, eq=False)
class HexGrid:
    """The abstract grid H_r; vertex ids are ``0 .. 6r^2 - 1``."""

    radius: int
    cells: tuple[Cell, ...]
    keys: tuple[VertexKey, ...]
    edges: tuple[tuple[int, int], ...]

    @cached_property
    def index(self) -> dict[VertexKey, int]:
        return {k: i for i, k in enumerate(self.keys)}

    @cached_property
    def circle(self) -> tuple[int, ...]:
        return tuple(circle_index(k) for k in self.keys)

    @cached_property
    def graph(self) -> Graph:
        return Graph(range(len(self.keys)), self.edges)

    @cached_property
    def cell_set(self) -> frozenset[Cell]:
        return frozenset(self.cells)

    def corners(self, cell: Cell) -> list[int]:
        return [self.index[k] for k in corner_keys(cell)]

    def cell_edges(self, cell: Cell) -> list[tuple[int, int]]:
        cs = self.corners(cell)
        return [tuple(sorted((cs[i], cs[(i + 1) % 6]))) for i in range(6)]

    def vertices_of_cells(self, cells: Iterable[Cell]) -> set[int]:
        return {v for c in cells for v in self.corners(c)}

    def edges_of_cells(self, cells: Iterable[Cell]) -> set[tuple[int, int]]:
        return {e for c in cells for e in self.cell_edges(c)}

    @property
    def num_vertices(self) -> int:
        return len(self.keys)


def build_hexgrid(r: int) -> HexGrid:
    if r < 1:
        raise DomainError("hex grid radius must be at least 1")
    cells = spiral((0, 0), r - 1)
    seen: dict[VertexKey, None] = {}
    for c in cells:
        for k in corner_keys(c):
            seen.setdefault(k, None)
    keys = sorted(seen, key=lambda k: (circle_index(k), k))
    index = {k: i for i, k in enumerate(keys)}
    edges = set()
    for c in cells:
        cs = [index[k] for k in corner_keys(c)]
        for i in range(6):
            a, b = cs[i], cs[(i + 1) % 6]
            edges.add((a, b) if a < b else (b, a))
    return HexGrid(r, tuple(cells), tuple(keys), tuple(sorted(edges)))


def rectangular_grid_threshold(r: int) -> int:
    """Treewidth above which a graph must contain the ``r x r`` grid: ``6r - 5``."""
    if r < 1:
        raise DomainError("r must be at least 1")
    return 6 * r - 5


# -- subdivisions ----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class HexSubdivision:
    """An image of H_r in a host graph.

    ``branch_map[v]`` is the host vertex of grid vertex ``v``; ``path_map``
    sends each grid edge ``(a, b)`` with ``a < b`` to a host path running
    from ``branch_map[a]`` to ``branch_map[b]``.
    """

    grid: HexGrid
    branch_map: dict[int, int]
    path_map: dict[tuple[int, int], tuple[int, ...]]

    @property
    def radius(self) -> int:
        return self.grid.radius

    def path(self, a: int, b: int) -> tuple[int, ...]:
        if a < b:
            return self.path_map[(a, b)]
        return tuple(reversed(self.path_map[(b, a)]))

    def host_vertices(self) -> set[int]:
        out = set(self.branch_map.values())
        for p in self.path_map.values():
            out.update(p)
        return out

    def host_edges(self) -> set[tuple[int, int]]:
        out = set()
        for p in self.path_map.values():
            for a, b in zip(p, p[1:]):
                out.add((a, b) if a < b else (b, a))
        return out

    def host_vertices_of_cells(self, cells: Iterable[Cell]) -> set[int]:
        out = set()
        for e in self.grid.edges_of_cells(cells):
            out.update(self.path_map[e])
        return out

    def host_edges_of_cells(self, cells: Iterable[Cell]) -> set[tuple[int, int]]:
        out = set()
        for e in self.grid.edges_of_cells(cells):
            p = self.path_map[e]
            for a, b in zip(p, p[1:]):
                out.add((a, b) if a < b else (b, a))
        return out

    def restrict(self, center: Cell, radius: int) -> HexSubdivision:
        """The sub-subdivision of H_radius formed by the ball of cells around ``center``."""
        small = build_hexgrid(radius)
        bmap = {}
        for v, key in enumerate(small.keys):
            bmap[v] = self.branch_map[self.grid.index[translate_key(key, center)]]
        pmap = {}
        for a, b in small.edges:
            ha = self.grid.index[translate_key(small.keys[a], center)]
            hb = self.grid.index[translate_key(small.keys[b], center)]
            pmap[(a, b)] = self.path(ha, hb)
        return HexSubdivision(small, bmap, pmap)

    def to_json(self) -> dict:
        return {
            "radius": self.radius,
            "branch_map": {str(v): h for v, h in sorted(self.branch_map.items())},
            "paths": [[a, b, list(p)] for (a, b), p in sorted(self.path_map.items())],
        }

    def to_dot(self, out: IO[str], g: Graph | None = None) -> None:
        """DOT rendering of the subdivision; branch vertices are filled red.

        With ``g`` given, host edges outside the subdivision are drawn dotted.
        """
        branch = set(self.branch_map.values())
        used = self.host_edges()
        out.write("graph hexsubdivision {\n  node [shape=point];\n")
        for v in sorted(self.host_vertices()):
            attr = ' [shape=circle, style=filled, fillcolor=red, width=0.15, label=""]' if v in branch else ""
            out.write(f"  {v}{attr};\n")
        for a, b in sorted(used):
            out.write(f"  {a} -- {b};\n")
        if g is not None:
            for a, b in g.edges():
                if (a, b) not in used:
                    out.write(f"  {a} -- {b} [style=dotted];\n")
        out.write("}\n")


def validate_hex_subdivision(g: Graph, s: HexSubdivision, *, topological: bool | None = None) -> list[str]:
    """All violated subdivision conditions (empty when ``s`` is valid in ``g``).

    The structural checks follow ``branch_map`` and ``path_map``.  The
    topological check ignores the maps: it smooths the union subgraph and
    H_r alike and compares them with a generic isomorphism test.  It runs by
    default for radius at most 4.
    """
    grid = s.grid
    problems = []
    if set(s.branch_map) != set(range(grid.num_vertices)):
        return ["branch map does not cover the grid vertices"]
    images = list(s.branch_map.values())
    if len(set(images)) != len(images):
        problems.append("branch map is not injective")
    if any(h not in g for h in images):
        problems.append("branch image missing from host")
    if set(s.path_map) != set(grid.edges):
        return problems + ["path map does not cover the grid edges exactly"]
    branch_set = set(images)
    interiors: set[int] = set()
    for (a, b), p in s.path_map.items():
        if len(p) < 2 or p[0] != s.branch_map[a] or p[-1] != s.branch_map[b]:
            problems.append(f"path for grid edge {a}-{b} has wrong endpoints")
            continue
        if len(set(p)) != len(p):
            problems.append(f"path for grid edge {a}-{b} repeats a vertex")
        if not all(g.has_edge(x, y) for x, y in zip(p, p[1:])):
            problems.append(f"path for grid edge {a}-{b} uses a non-edge")
        inner = set(p[1:-1])
        if inner & branch_set:
            problems.append(f"path for grid edge {a}-{b} passes through a branch vertex")
        if inner & interiors:
            problems.append(f"path for grid edge {a}-{b} overlaps another path")
        interiors |= inner
    if problems:
        return problems
    if topological is None:
        topological = grid.radius <= 4
    if topological and not topologically_equal(Graph(s.host_vertices(), s.host_edges()), grid.graph):
        problems.append("union subgraph is not a subdivision of the grid")
    return problems


def smooth(g: Graph) -> nx.MultiGraph:
    """Suppress every degree-2 vertex, keeping parallel edges and loops.

    A component that is a bare cycle becomes a single vertex with a loop.
    """
    h = nx.MultiGraph()
    h.add_nodes_from(g.vertices())
    h.add_edges_from(g.edges())
    changed = True
    while changed:
        changed = False
        for v in sorted(h.nodes):
            if h.degree(v) != 2 or h.number_of_edges(v, v):
                continue
            nbrs = [u for _, u in h.edges(v)]
            h.remove_node(v)
            h.add_edge(nbrs[0], nbrs[1])
            changed = True
    return h


def topologically_equal(a: Graph, b: Graph) -> bool:
    """Whether ``a`` and ``b`` have isomorphic smoothings (same graph up to subdivision)."""
    sa, sb = smooth(a), smooth(b)
    if sa.number_of_nodes() != sb.number_of_nodes() or sa.number_of_edges() != sb.number_of_edges():
        return False
    return nx.is_isomorphic(sa, sb)


def subdivision_of_grid(grid: HexGrid, lengths: dict[tuple[int, int], int], start: int = 0) -> tuple[Graph, HexSubdivision]:
    """Host graph subdividing each grid edge ``e`` into ``lengths.get(e, 1)`` edges.

    Grid vertex ``v`` becomes host vertex ``start + v``; subdivision
    vertices follow in edge order.
    """
    nxt = start + grid.num_vertices
    bmap = {v: start + v for v in range(grid.num_vertices)}
    pmap = {}
    edges = []
    for a, b in grid.edges:
        path = [bmap[a]]
        for _ in range(lengths.get((a, b), 1) - 1):
            path.append(nxt)
            nxt += 1
        path.append(bmap[b])
        pmap[(a, b)] = tuple(path)
        edges.extend(zip(path, path[1:]))
    host = Graph(range(start, nxt), edges)
    return host, HexSubdivision(grid, bmap, pmap)


def iter_cell_order_ears(grid: HexGrid) -> Iterator[tuple[Cell, list[int], list[int]]]:
    """For each cell in spiral order: (cell, embedded corner run, new corners).

    The embedded run lists the corners already present, as one contiguous
    arc; new corners continue the cycle from the run's end back to its start.
    Raises ``AssertionError`` if some cell meets the embedded part in more
    than one arc.
    """
    done_edges: set[tuple[int, int]] = set()
    done_vertices: set[int] = set()
    for cell in grid.cells:
        cs = grid.corners(cell)
        es = [tuple(sorted((cs[i], cs[(i + 1) % 6]))) for i in range(6)]
        if not done_vertices:
            yield cell, [], cs
        else:
            present = [e in done_edges for e in es]
            if all(present):
                raise AssertionError(f"cell {cell} already fully embedded")
            if not any(present):
                touched = [v for v in cs if v in done_vertices]
                if len(touched) != 1:
                    raise AssertionError(f"cell {cell} touches the embedded part ambiguously")
                i = cs.index(touched[0])
                yield cell, [cs[i]], [cs[(i + j) % 6] for j in range(1, 6)]
            else:
                # run of present edges e_i..e_j; corner i .. corner j+1
                starts = [i for i in range(6) if present[i] and not present[i - 1]]
                if len(starts) != 1:
                    raise AssertionError(f"cell {cell} meets the embedded part in {len(starts)} arcs")
                i = starts[0]
                run = [cs[i]]
                j = i
                while present[j % 6]:
                    j += 1
                    run.append(cs[j % 6])
                new = [cs[(j + t) % 6] for t in range(1, 6 - (j - i))]
                if any(v in done_vertices for v in new):
                    raise AssertionError(f"cell {cell} has an embedded corner off its run")
                yield cell, run, new
        done_edges.update(es)
        done_vertices.update(cs)
