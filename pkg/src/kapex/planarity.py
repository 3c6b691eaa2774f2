"""Planarity testing, combinatorial embeddings and Kuratowski witnesses.

The yes/no test comes from the edge-addition planarity suite (the
``planarity`` package) and the rotation system from networkx's left-right
implementation, so the two answers are computed independently.  Both are
backed by certificates checked here without networkx: a rotation system is
accepted only if its face count satisfies Euler's formula on every
component, and a witness is accepted only if it really is a subdivision of
K5 or K3,3 inside the host graph.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from itertools import combinations

import networkx as nx
import planarity

from .graph import Edge, Graph, bfs_order, connected_components

Rotation = dict[int, tuple[int, ...]]


def _edges_planar(edges: Sequence[Edge]) -> bool:
    if len(edges) < 9:
        return True
    return planarity.is_planar(edges)


def is_planar(g: Graph) -> bool:
    if g.n <= 4:
        return True
    if g.m > 3 * g.n - 6:
        return False
    return _edges_planar(list(g.edges()))


def _surely_planar(edges: Sequence[Edge]) -> bool:
    """Cheap sufficient test: after peeling degree-1 vertices, fewer than five
    vertices of degree three or more leave no room for K5 or K3,3."""
    adj: dict[int, list[int]] = {}
    for u, v in edges:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    deg = {v: len(ns) for v, ns in adj.items()}
    stack = [v for v, d in deg.items() if d <= 1]
    gone = set()
    while stack:
        v = stack.pop()
        if v in gone:
            continue
        gone.add(v)
        for u in adj[v]:
            if u not in gone:
                deg[u] -= 1
                if deg[u] == 1:
                    stack.append(u)
    return sum(1 for v, d in deg.items() if v not in gone and d >= 3) < 5


def _nonplanar(edges: Sequence[Edge]) -> bool:
    return len(edges) >= 9 and not _surely_planar(edges) and not _edges_planar(edges)


def _induced_edges(adj: dict[int, frozenset[int]], keep: Iterable[int]) -> list[Edge]:
    keep = set(keep)
    return [(u, v) for u in keep for v in adj[u] if v in keep and u < v]


# -- embeddings ------------------------------------------------------------------


def planar_embedding(g: Graph) -> Rotation | None:
    """Clockwise neighbor order at every vertex, or ``None`` if ``g`` is nonplanar."""
    ok, emb = nx.check_planarity(g.to_networkx())
    if not ok:
        return None
    return {v: tuple(emb.neighbors_cw_order(v)) for v in g.sorted_vertices()}


def faces(rotation: Rotation) -> list[list[Edge]]:
    """Trace the faces of a rotation system; each face is a cyclic list of darts."""
    succ: dict[tuple[int, int], int] = {}
    for v, order in rotation.items():
        d = len(order)
        for i, u in enumerate(order):
            succ[(v, u)] = order[(i + 1) % d]
    seen: set[tuple[int, int]] = set()
    out = []
    for v in sorted(rotation):
        for u in rotation[v]:
            dart = (u, v)
            if dart in seen:
                continue
            face = []
            while dart not in seen:
                seen.add(dart)
                face.append(dart)
                a, b = dart
                dart = (b, succ[(b, a)])
            out.append(face)
    return out


def embedding_is_planar(g: Graph, rotation: Rotation) -> bool:
    """Check that ``rotation`` is a genus-0 embedding of ``g`` (Euler per component)."""
    if set(rotation) != g.vertices():
        return False
    for v, order in rotation.items():
        if len(order) != len(set(order)) or set(order) != g.neighbors(v):
            return False
    face_list = faces(rotation)
    for comp in connected_components(g):
        nv = len(comp)
        ne = sum(g.degree(v) for v in comp) // 2
        if ne == 0:
            continue
        nf = sum(1 for face in face_list if face[0][0] in comp)
        if nv - ne + nf != 2:
            return False
    return True


# -- Kuratowski witnesses ----------------------------------------------------------


@dataclass(frozen=True)
class KuratowskiWitness:
    """A subdivision of K5 or K3,3 inside a host graph.

    For ``K33`` the first three branch vertices form one side of the bipartition.
    """

    kind: str
    branch_vertices: tuple[int, ...]
    edge_paths: tuple[tuple[int, ...], ...]

    def vertices(self) -> frozenset[int]:
        vs = set(self.branch_vertices)
        for p in self.edge_paths:
            vs.update(p)
        return frozenset(vs)

    def edges(self) -> list[Edge]:
        out = set()
        for p in self.edge_paths:
            for a, b in zip(p, p[1:]):
                out.add((a, b) if a < b else (b, a))
        return sorted(out)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "branch_vertices": list(self.branch_vertices),
            "edge_paths": [list(p) for p in self.edge_paths],
        }


def validate_kuratowski(g: Graph, w: KuratowskiWitness) -> list[str]:
    """Return the list of violated witness conditions (empty when valid)."""
    problems = []
    branch = w.branch_vertices
    if w.kind == "K5":
        if len(branch) != 5 or len(w.edge_paths) != 10:
            return ["K5 witness needs 5 branch vertices and 10 edge-paths"]
        required = {frozenset(p) for p in combinations(branch, 2)}
    elif w.kind == "K33":
        if len(branch) != 6 or len(w.edge_paths) != 9:
            return ["K33 witness needs 6 branch vertices and 9 edge-paths"]
        required = {frozenset((a, b)) for a in branch[:3] for b in branch[3:]}
    else:
        return [f"unknown witness kind {w.kind!r}"]
    if len(set(branch)) != len(branch):
        problems.append("branch vertices repeat")
    if any(v not in g for v in branch):
        problems.append("branch vertex missing from host")
    got = set()
    interiors: set[int] = set()
    for p in w.edge_paths:
        if len(p) < 2:
            problems.append(f"degenerate path {p}")
            continue
        got.add(frozenset((p[0], p[-1])))
        if len(set(p)) != len(p):
            problems.append(f"path {p} repeats a vertex")
        for a, b in zip(p, p[1:]):
            if not g.has_edge(a, b):
                problems.append(f"path edge {a}-{b} not in host")
        inner = set(p[1:-1])
        if inner & set(branch):
            problems.append(f"path {p} passes through a branch vertex")
        if inner & interiors:
            problems.append(f"path {p} shares interior vertices with another path")
        interiors |= inner
    if got != required:
        problems.append("edge-paths do not connect exactly the required branch pairs")
    return problems


def find_kuratowski(g: Graph) -> KuratowskiWitness | None:
    """A Kuratowski subdivision in ``g``, or ``None`` when ``g`` is planar.

    Components are examined in order of their smallest id and the first
    nonplanar one supplies the witness.
    """
    if is_planar(g):
        return None
    comps = connected_components(g)
    for comp in comps:
        if len(comps) == 1:
            h = g
        else:
            if len(comp) < 5:
                continue
            h = g.induced_subgraph(comp)
            if is_planar(h):
                continue
        return _extract(g, h)
    raise AssertionError("nonplanar graph without a nonplanar component")


def _shrink(items: Sequence, nonplanar) -> list:
    """Minimal-prefix extraction.

    Returns ``keep`` such that ``nonplanar(keep)`` holds and dropping any
    single element breaks it.  Requires ``nonplanar(items)``.  Prefix sizes
    grow geometrically, so a local obstruction near the front of ``items``
    only ever costs tests on small graphs.
    """
    keep: list = []
    cand = list(items)
    while not nonplanar(keep):
        size = len(cand)
        lo, hi, step = 0, size, 1
        while step < size:
            if nonplanar(keep + cand[:step]):
                hi = step
                break
            lo = step
            step *= 2
        # smallest i in (lo, hi] with keep + cand[:i] nonplanar
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if nonplanar(keep + cand[:mid]):
                hi = mid
            else:
                lo = mid
        keep.append(cand[hi - 1])
        cand = cand[: hi - 1]
    return keep


def _extract(host: Graph, h: Graph) -> KuratowskiWitness:
    adj = h.adjacency()
    hub = min(h, key=lambda v: (-h.degree(v), v))
    order = bfs_order(h, hub)

    core = _shrink(order, lambda vs: _nonplanar(_induced_edges(adj, vs)))
    core_set = set(core)
    rank = {v: i for i, v in enumerate(order)}
    edges = sorted(
        ((u, v) for u in core for v in adj[u] if v in core_set and u < v),
        key=lambda e: (max(rank[e[0]], rank[e[1]]), min(rank[e[0]], rank[e[1]])),
    )
    kept = _shrink(edges, _nonplanar)
    return _witness_from_edges(host, kept)


def _witness_from_edges(host: Graph, edges: list[Edge]) -> KuratowskiWitness:
    nbrs: dict[int, list[int]] = {}
    for u, v in edges:
        nbrs.setdefault(u, []).append(v)
        nbrs.setdefault(v, []).append(u)
    branch = sorted(v for v, ns in nbrs.items() if len(ns) >= 3)
    branch_set = set(branch)
    paths = {}
    for b in branch:
        for first in sorted(nbrs[b]):
            path = [b, first]
            prev, cur = b, first
            while cur not in branch_set:
                a, c = nbrs[cur]
                prev, cur = cur, (c if a == prev else a)
                path.append(cur)
            key = frozenset((b, cur))
            if key not in paths:
                paths[key] = tuple(path) if b < cur else tuple(reversed(path))
    paths = {key: _shortcut(host, p) for key, p in paths.items()}
    if len(branch) == 5:
        ordered = [paths[frozenset(pair)] for pair in combinations(branch, 2)]
        return KuratowskiWitness("K5", tuple(branch), tuple(ordered))
    if len(branch) != 6:
        raise AssertionError(f"minimal nonplanar subgraph with {len(branch)} branch vertices")
    side_a = [branch[0]] + [v for v in branch[1:] if frozenset((branch[0], v)) not in paths]
    side_b = [v for v in branch if v not in side_a]
    ordered = [paths[frozenset((a, b))] for a in side_a for b in side_b]
    return KuratowskiWitness("K33", tuple(side_a) + tuple(side_b), tuple(ordered))


def _shortcut(host: Graph, path: tuple[int, ...]) -> tuple[int, ...]:
    """Jump along host chords between non-consecutive vertices of one edge-path."""
    out = [path[0]]
    i = 0
    while i < len(path) - 1:
        j = len(path) - 1
        while j > i + 1 and not host.has_edge(path[i], path[j]):
            j -= 1
        out.append(path[j])
        i = j
    return tuple(out)


def witness_graph(w: KuratowskiWitness) -> Graph:
    return Graph(w.vertices(), w.edges())
