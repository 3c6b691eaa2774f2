"""Immutable simple undirected graphs with stable integer vertex ids.

Vertex ids survive every subgraph operation, so a vertex set computed on a
reduced graph can be used directly against the graph it was derived from.
"""

from __future__ import annotations

import io
from collections import deque
from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from typing import IO, Union

import networkx as nx

MAX_VERTEX_ID = 2**31 - 1

Edge = tuple[int, int]


class DomainError(ValueError):
    """An operation was called outside its precondition."""


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None) -> None:
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class CapacityError(ValueError):
    """Input describes more vertices than the loader accepts."""


class ResourceLimitError(RuntimeError):
    """A configured node, time or enumeration limit was exceeded."""


def _edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


class Graph:
    """Simple undirected graph; never mutated after construction."""

    __slots__ = ("_adj", "_m", "_nx")

    def __init__(self, vertices: Iterable[int] = (), edges: Iterable[Edge] = ()) -> None:
        adj: dict[int, set[int]] = {int(v): set() for v in vertices}
        for u, v in edges:
            if u == v:
                raise DomainError(f"self-loop at {u}")
            adj.setdefault(u, set()).add(v)
            adj.setdefault(v, set()).add(u)
        self._adj = {v: frozenset(ns) for v, ns in adj.items()}
        self._m = sum(len(ns) for ns in self._adj.values()) // 2
        self._nx: nx.Graph | None = None

    @classmethod
    def _from_adj(cls, adj: dict[int, frozenset[int]], m: int | None = None) -> Graph:
        g = cls.__new__(cls)
        g._adj = adj
        g._m = m if m is not None else sum(len(ns) for ns in adj.values()) // 2
        g._nx = None
        return g

    @classmethod
    def from_networkx(cls, h: nx.Graph) -> Graph:
        return cls(h.nodes, ((u, v) for u, v in h.edges if u != v))

    # -- queries -----------------------------------------------------------

    @property
    def n(self) -> int:
        return len(self._adj)

    @property
    def m(self) -> int:
        return self._m

    def __len__(self) -> int:
        return len(self._adj)

    def __contains__(self, v: object) -> bool:
        return v in self._adj

    def __iter__(self) -> Iterator[int]:
        return iter(self._adj)

    def vertices(self) -> frozenset[int]:
        return frozenset(self._adj)

    def sorted_vertices(self) -> list[int]:
        return sorted(self._adj)

    def neighbors(self, v: int) -> frozenset[int]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        ns = self._adj.get(u)
        return ns is not None and v in ns

    def edges(self) -> list[Edge]:
        """Edges as sorted ``(u, v)`` pairs with ``u < v``."""
        return sorted((u, v) for u, ns in self._adj.items() for v in ns if u < v)

    def adjacency(self) -> dict[int, frozenset[int]]:
        return dict(self._adj)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._adj == other._adj

    def __hash__(self) -> int:
        return hash((frozenset(self._adj), self._m))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"

    # -- derived graphs ------------------------------------------------------

    def delete_vertices(self, s: Iterable[int]) -> Graph:
        """Return ``G - S``. Raises :class:`DomainError` if ``S`` is not a subset of ``V(G)``."""
        s = frozenset(s)
        missing = s - self._adj.keys()
        if missing:
            raise DomainError(f"vertices not in graph: {sorted(missing)[:10]}")
        if not s:
            return self
        adj = {v: (ns - s if not ns.isdisjoint(s) else ns) for v, ns in self._adj.items() if v not in s}
        return Graph._from_adj(adj)

    def induced_subgraph(self, keep: Iterable[int]) -> Graph:
        keep = frozenset(keep)
        missing = keep - self._adj.keys()
        if missing:
            raise DomainError(f"vertices not in graph: {sorted(missing)[:10]}")
        adj = {v: self._adj[v] & keep for v in keep}
        return Graph._from_adj(adj)

    def edge_subgraph(self, edges: Iterable[Edge]) -> Graph:
        edges = list(edges)
        for u, v in edges:
            if not self.has_edge(u, v):
                raise DomainError(f"edge {u}-{v} not in graph")
        return Graph((), edges)

    def with_edges(self, edges: Iterable[Edge], vertices: Iterable[int] = ()) -> Graph:
        """Return a copy with extra vertices/edges; loops and duplicates are ignored."""
        adj = {v: set(ns) for v, ns in self._adj.items()}
        for v in vertices:
            adj.setdefault(v, set())
        for u, v in edges:
            if u == v:
                continue
            adj.setdefault(u, set()).add(v)
            adj.setdefault(v, set()).add(u)
        return Graph._from_adj({v: frozenset(ns) for v, ns in adj.items()})

    def to_networkx(self) -> nx.Graph:
        """A networkx view, built once and cached. Callers must not mutate it."""
        if self._nx is None:
            h = nx.Graph()
            h.add_nodes_from(self._adj)
            h.add_edges_from((u, v) for u, ns in self._adj.items() for v in ns if u < v)
            self._nx = h
        return self._nx


def delete_vertices(g: Graph, s: Iterable[int]) -> Graph:
    return g.delete_vertices(s)


def connected_components(g: Graph) -> list[frozenset[int]]:
    """Connected components ordered by their smallest vertex id."""
    seen: set[int] = set()
    comps = []
    for root in g.sorted_vertices():
        if root in seen:
            continue
        seen.add(root)
        comp = [root]
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for w in g.neighbors(u):
                if w not in seen:
                    seen.add(w)
                    comp.append(w)
                    queue.append(w)
        comps.append(frozenset(comp))
    return comps


def bfs_order(g: Graph, root: int, allowed: frozenset[int] | set[int] | None = None) -> list[int]:
    """Breadth-first order from ``root``; neighbors visited in increasing id."""
    seen = {root}
    order = [root]
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for w in sorted(g.neighbors(u)):
            if w in seen or (allowed is not None and w not in allowed):
                continue
            seen.add(w)
            order.append(w)
            queue.append(w)
    return order


def bfs_distances(g: Graph, sources: Iterable[int], allowed: frozenset[int] | set[int] | None = None) -> dict[int, int]:
    dist = {s: 0 for s in sources}
    queue = deque(dist)
    while queue:
        u = queue.popleft()
        du = dist[u] + 1
        for w in g.neighbors(u):
            if w not in dist and (allowed is None or w in allowed):
                dist[w] = du
                queue.append(w)
    return dist


def is_path_in(g: Graph, path: tuple[int, ...] | list[int]) -> bool:
    """Consecutive vertices adjacent and no vertex repeated."""
    if len(set(path)) != len(path):
        return False
    return all(g.has_edge(a, b) for a, b in zip(path, path[1:]))


def edge_count_prefilter(g: Graph, k: int) -> str:
    """``"reject"`` when ``|E| > (k+3)|V|``, which already rules out ``k`` apices."""
    return "reject" if g.m > (k + 3) * g.n else "pass"


# -- I/O -----------------------------------------------------------------------


@dataclass(frozen=True)
class LoadResult:
    graph: Graph
    duplicate_edges: int = 0
    self_loops: int = 0


Source = Union[bytes, str, IO[bytes], IO[str]]


def _lines(source: Source) -> Iterator[str]:
    if isinstance(source, bytes):
        source = io.StringIO(source.decode("utf-8"))
    elif isinstance(source, str):
        source = io.StringIO(source)
    for raw in source:
        yield raw.decode("utf-8") if isinstance(raw, bytes) else raw


def _vertex(token: str, lineno: int) -> int:
    try:
        v = int(token)
    except ValueError:
        raise ParseError(f"expected an integer vertex id, got {token!r}", lineno) from None
    if v < 0:
        raise ParseError(f"negative vertex id {v}", lineno)
    if v > MAX_VERTEX_ID:
        raise CapacityError(f"line {lineno}: vertex id {v} exceeds {MAX_VERTEX_ID}")
    return v


def load_graph(source: Source, fmt: str = "edges") -> LoadResult:
    """Parse an edge list (``fmt="edges"``) or a DIMACS ``p edge`` file.

    Edge lists hold one ``u v`` pair per line; a line with a single id declares
    an isolated vertex; ``#`` starts a comment line.  DIMACS ids are kept as
    written (1-based).  Self-loops and repeated edges are dropped and counted.
    """
    if fmt in ("edges", "edge-list", "edgelist"):
        return _load_edge_list(source)
    if fmt == "dimacs":
        return _load_dimacs(source)
    raise DomainError(f"unknown graph format {fmt!r}")


def _load_edge_list(source: Source) -> LoadResult:
    vertices: set[int] = set()
    edges: set[Edge] = set()
    dups = loops = 0
    for lineno, line in enumerate(_lines(source), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) == 1:
            vertices.add(_vertex(parts[0], lineno))
            continue
        if len(parts) != 2:
            raise ParseError(f"expected 'u v', got {line!r}", lineno)
        u, v = _vertex(parts[0], lineno), _vertex(parts[1], lineno)
        vertices.update((u, v))
        if u == v:
            loops += 1
            continue
        e = _edge(u, v)
        if e in edges:
            dups += 1
        else:
            edges.add(e)
    return LoadResult(Graph(vertices, edges), dups, loops)


def _load_dimacs(source: Source) -> LoadResult:
    n: int | None = None
    edges: set[Edge] = set()
    dups = loops = 0
    for lineno, line in enumerate(_lines(source), 1):
        parts = line.split()
        if not parts or parts[0] == "c":
            continue
        tag = parts[0]
        if tag == "p":
            if n is not None:
                raise ParseError("duplicate problem line", lineno)
            if len(parts) != 4 or parts[1] not in ("edge", "col"):
                raise ParseError(f"expected 'p edge n m', got {line.strip()!r}", lineno)
            n = _vertex(parts[2], lineno)
            _vertex(parts[3], lineno)
        elif tag == "e":
            if n is None:
                raise ParseError("edge line before problem line", lineno)
            if len(parts) != 3:
                raise ParseError(f"expected 'e u v', got {line.strip()!r}", lineno)
            u, v = _vertex(parts[1], lineno), _vertex(parts[2], lineno)
            for w in (u, v):
                if w < 1:
                    raise ParseError(f"DIMACS ids are 1-based, got {w}", lineno)
                if w > n:
                    raise CapacityError(f"line {lineno}: vertex {w} exceeds declared count {n}")
            if u == v:
                loops += 1
                continue
            e = _edge(u, v)
            if e in edges:
                dups += 1
            else:
                edges.add(e)
        else:
            raise ParseError(f"unknown line type {tag!r}", lineno)
    if n is None:
        return LoadResult(Graph(), 0, 0)
    return LoadResult(Graph(range(1, n + 1), edges), dups, loops)


def write_edge_list(g: Graph, out: IO[str]) -> None:
    """Inverse of the edge-list loader; isolated vertices get a one-id line."""
    covered = set()
    for u, v in g.edges():
        out.write(f"{u} {v}\n")
        covered.update((u, v))
    for v in g.sorted_vertices():
        if v not in covered:
            out.write(f"{v}\n")


def write_dimacs(g: Graph, out: IO[str]) -> None:
    if g.n and min(g) < 1:
        raise DomainError("DIMACS output needs 1-based vertex ids")
    n = max(g) if g.n else 0
    if n != g.n:
        raise DomainError("DIMACS output needs contiguous ids 1..n")
    out.write(f"p edge {n} {g.m}\n")
    for u, v in g.edges():
        out.write(f"e {u} {v}\n")


def dumps_edge_list(g: Graph) -> str:
    buf = io.StringIO()
    write_edge_list(g, buf)
    return buf.getvalue()


# -- standard graphs used by tests and generators ------------------------------


def complete_graph(n: int, start: int = 0) -> Graph:
    vs = range(start, start + n)
    return Graph(vs, ((u, v) for u in vs for v in vs if u < v))


def complete_bipartite(a: int, b: int, start: int = 0) -> Graph:
    left = range(start, start + a)
    right = range(start + a, start + a + b)
    return Graph(list(left) + list(right), ((u, v) for u in left for v in right))


def grid_graph(rows: int, cols: int, start: int = 0) -> Graph:
    """Rectangular grid; vertex ``(i, j)`` gets id ``start + i*cols + j``."""
    def vid(i: int, j: int) -> int:
        return start + i * cols + j

    edges = []
    for i in range(rows):
        for j in range(cols):
            if i + 1 < rows:
                edges.append((vid(i, j), vid(i + 1, j)))
            if j + 1 < cols:
                edges.append((vid(i, j), vid(i, j + 1)))
    return Graph((vid(i, j) for i in range(rows) for j in range(cols)), edges)


def path_graph(n: int, start: int = 0) -> Graph:
    return Graph(range(start, start + n), ((start + i, start + i + 1) for i in range(n - 1)))


def disjoint_union(*graphs: Graph) -> Graph:
    vertices: list[int] = []
    edges: list[Edge] = []
    for h in graphs:
        if not set(vertices).isdisjoint(h.vertices()):
            raise DomainError("graphs share vertex ids")
        vertices.extend(h)
        edges.extend(h.edges())
    return Graph(vertices, edges)


def subdivide_edge(g: Graph, u: int, v: int, new_vertex: int | None = None) -> Graph:
    """Replace edge ``uv`` by a path ``u - w - v`` through a fresh vertex ``w``."""
    if not g.has_edge(u, v):
        raise DomainError(f"edge {u}-{v} not in graph")
    w = (max(g) + 1) if new_vertex is None else new_vertex
    if w in g:
        raise DomainError(f"vertex {w} already present")
    adj = {x: set(ns) for x, ns in g.adjacency().items()}
    adj[u].discard(v)
    adj[v].discard(u)
    adj[u].add(w)
    adj[v].add(w)
    adj[w] = {u, v}
    return Graph._from_adj({x: frozenset(ns) for x, ns in adj.items()})
