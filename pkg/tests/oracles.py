"""Reference answers computed without the package's planarity engine.

Every planarity decision here goes through networkx's left-right test, while
the package answers yes/no questions with the edge-addition library.  The
package's Kuratowski finder is used only to prune candidates, and each witness
it hands over is re-checked for nonplanarity here before it prunes anything.
"""

from __future__ import annotations

from itertools import combinations

import networkx as nx

from kapex.graph import Graph
from kapex.planarity import find_kuratowski


def to_nx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(g.vertices())
    h.add_edges_from(g.edges())
    return h


def nx_planar(g: Graph | nx.Graph) -> bool:
    return nx.check_planarity(g if isinstance(g, nx.Graph) else to_nx(g))[0]


def brute_force_min_apex(g: Graph, k_max: int) -> int | None:
    """Smallest apex set size up to ``k_max`` by exhaustive subsets, or ``None``."""
    h = to_nx(g)
    vs = sorted(h)
    for size in range(min(k_max, len(vs)) + 1):
        for x in combinations(vs, size):
            rest = h.copy()
            rest.remove_nodes_from(x)
            if nx_planar(rest):
                return size
    return None


def brute_force_apex_sets(g: Graph, k: int) -> set[frozenset[int]]:
    h = to_nx(g)
    out = set()
    for size in range(min(k, h.number_of_nodes()) + 1):
        for x in combinations(sorted(h), size):
            rest = h.copy()
            rest.remove_nodes_from(x)
            if nx_planar(rest):
                out.add(frozenset(x))
    return out


def _checked_witness(g: Graph) -> frozenset[int]:
    w = find_kuratowski(g)
    assert w is not None, "oracle: finder returned no witness for a nonplanar graph"
    vs = w.vertices()
    sub = to_nx(g).subgraph(vs)
    assert not nx_planar(nx.Graph(sub)), "oracle: finder witness is planar"
    return vs


def single_apex_vertices(g: Graph) -> frozenset[int] | None:
    """All ``x`` with ``g - x`` planar; ``None`` when ``g`` itself is planar.

    Any apex vertex lies in every nonplanar subgraph, so the candidates start
    as one certified nonplanar subgraph and shrink by intersecting with a
    witness of ``g - c`` whenever a candidate ``c`` fails.
    """
    h = to_nx(g)
    if nx_planar(h):
        return None
    candidates = set(_checked_witness(g))
    found = set()
    for c in sorted(candidates):
        if c not in candidates:
            continue
        if nx_planar(nx.restricted_view(h, [c], [])):
            found.add(c)
        else:
            candidates &= _checked_witness(g.delete_vertices((c,)))
    return frozenset(found)


def min_apex_upto_one(g: Graph, hints: tuple[int, ...] = ()) -> int | None:
    """0, 1 or ``None`` (needs more than one vertex).

    A hinted vertex whose deletion leaves a planar graph settles the answer
    without the full candidate scan.
    """
    h = to_nx(g)
    if nx_planar(h):
        return 0
    for v in hints:
        if v in h and nx_planar(nx.restricted_view(h, [v], [])):
            return 1
    singles = single_apex_vertices(g)
    if singles is None:
        return 0
    return 1 if singles else None


def ordering_width_at_most(g: Graph, w: int) -> bool:
    """Whether some elimination order keeps every eliminated degree at most ``w``.

    Plain depth-first search over orders with pruning; no memo over vertex
    subsets, so it shares nothing with the package's subset recursion.
    """
    adj0 = {v: set(g.neighbors(v)) for v in g}

    def search(adj: dict[int, set[int]]) -> bool:
        if len(adj) <= w + 1:
            return True
        for v in sorted(adj, key=lambda x: len(adj[x])):
            ns = adj[v]
            if len(ns) > w:
                break
            nxt = {u: set(us) for u, us in adj.items() if u != v}
            for a in ns:
                nxt[a].discard(v)
                nxt[a] |= ns - {a}
            if search(nxt):
                return True
        return False

    return search(adj0)


def treewidth_by_orders(g: Graph) -> int:
    if g.n == 0:
        return -1
    w = 0
    while not ordering_width_at_most(g, w):
        w += 1
    return w


def hex_ball_geometric(r: int) -> nx.Graph:
    """H_r built from planar coordinates: hexagon corners rounded and merged."""
    import math

    def center(q: int, s: int) -> tuple[float, float]:
        return (math.sqrt(3) * (q + s / 2), 1.5 * s)

    def dist(q: int, s: int) -> int:
        return max(abs(q), abs(s), abs(q + s))

    h = nx.Graph()
    span = r - 1
    for q in range(-span, span + 1):
        for s in range(-span, span + 1):
            if dist(q, s) > span:
                continue
            cx, cy = center(q, s)
            corners = [
                (round(cx + math.cos(math.pi / 6 + i * math.pi / 3), 6), round(cy + math.sin(math.pi / 6 + i * math.pi / 3), 6))
                for i in range(6)
            ]
            for i in range(6):
                h.add_edge(corners[i], corners[(i + 1) % 6])
    return h


def max_attachment_paths(g: Graph, x: int, forbidden: set[int], group: dict[int, int]) -> int:
    """Largest family of x-paths meeting only at x, ending in distinct groups.

    Every path stops at the first target it reaches; its interior avoids
    ``forbidden`` and all targets.  Exhaustive: all such paths are listed,
    then the best pairwise compatible subfamily is found by branching.
    """
    paths: list[tuple[frozenset[int], int]] = []

    def walk(v: int, seen: list[int]) -> None:
        for w in sorted(g.neighbors(v)):
            if w in seen:
                continue
            if w in group:
                paths.append((frozenset(seen[1:] + [w]), group[w]))
            elif w not in forbidden:
                walk(w, seen + [w])

    walk(x, [x])
    paths = [p for p in paths if group.get(x) != p[1]]
    best = 0

    def pick(i: int, used: frozenset[int], groups: frozenset[int], count: int) -> None:
        nonlocal best
        best = max(best, count)
        if count + len(paths) - i <= best:
            return
        for j in range(i, len(paths)):
            vs, grp = paths[j]
            if grp not in groups and not vs & used:
                pick(j + 1, used | vs, groups | {grp}, count + 1)

    pick(0, frozenset(), frozenset(), 0)
    return best


def _suppress_degree_two(h: nx.Graph) -> nx.Graph:
    """Smooth away degree-2 vertices whose neighbors are not yet adjacent."""
    h = nx.Graph(h)
    stack = [v for v in h if h.degree(v) == 2]
    while stack:
        v = stack.pop()
        if v not in h or h.degree(v) != 2:
            continue
        a, b = h.neighbors(v)
        if h.has_edge(a, b):
            continue
        h.remove_node(v)
        h.add_edge(a, b)
    return h


def _largest_face_darts(emb: nx.PlanarEmbedding) -> list[tuple]:
    seen: set[tuple] = set()
    faces = []
    for u, v in emb.edges():
        if (u, v) not in seen:
            face = emb.traverse_face(u, v, mark_half_edges=seen)
            faces.append([(face[i], face[(i + 1) % len(face)]) for i in range(len(face))])
    size = max(map(len, faces))
    return [d for f in faces if len(f) == size for d in f]


def _extend_map(ea: nx.PlanarEmbedding, eb: nx.PlanarEmbedding, start: tuple, image: tuple, mirror: bool) -> dict | None:
    """Grow a dart map from one seed by following rotations; None on any clash."""
    vmap: dict = {start[0]: image[0], start[1]: image[1]}
    used = {image[0], image[1]}
    done: set[tuple] = set()
    todo = [(start, image)]
    while todo:
        (u, v), (x, y) = todo.pop()
        if (u, v) in done:
            continue
        done.add((u, v))
        nxt_a = ea[u][v]["cw"]
        nxt_b = eb[x][y]["ccw" if mirror else "cw"]
        for a, b in ((nxt_a, nxt_b), (u, x), (v, y)):
            if a in vmap:
                if vmap[a] != b:
                    return None
            elif b in used:
                return None
            else:
                vmap[a] = b
                used.add(b)
        todo.append(((u, nxt_a), (x, nxt_b)))
        todo.append(((v, u), (y, x)))
    return vmap


def homeomorphic_to_hex_ball(edges, r: int) -> bool:
    """Whether the graph on ``edges`` is a subdivision of the honeycomb ball H_r.

    The reference ball comes from planar coordinates.  Both sides are
    smoothed, then an explicit isomorphism is searched by fixing a dart on a
    largest face of the reference and trying every largest-face dart of the
    candidate in both orientations.  A returned True is backed by a map that
    has been checked edge by edge.
    """
    cand = nx.Graph(list(edges))
    if cand.number_of_nodes() == 0 or not nx.is_connected(cand):
        return False
    if r == 1:
        return cand.number_of_nodes() >= 6 and all(d == 2 for _, d in cand.degree())
    ref = _suppress_degree_two(hex_ball_geometric(r))
    cand = _suppress_degree_two(cand)
    if (cand.number_of_nodes(), cand.number_of_edges()) != (ref.number_of_nodes(), ref.number_of_edges()):
        return False
    if sorted(d for _, d in cand.degree()) != sorted(d for _, d in ref.degree()):
        return False
    ok_a, ea = nx.check_planarity(ref)
    ok_b, eb = nx.check_planarity(cand)
    if not ok_b:
        return False
    seed = _largest_face_darts(ea)[0]
    ref_edges = {frozenset(e) for e in ref.edges()}
    cand_edges = {frozenset(e) for e in cand.edges()}
    for image in _largest_face_darts(eb):
        for mirror in (False, True):
            vmap = _extend_map(ea, eb, seed, image, mirror)
            if vmap is not None and len(vmap) == ref.number_of_nodes():
                if {frozenset((vmap[a], vmap[b])) for a, b in ref_edges} == cand_edges:
                    return True
    return False
