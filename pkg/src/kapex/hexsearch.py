"""Budgeted search for a subdivision of H_r in a host graph.

The grid is grown one cell at a time in spiral order.  The first cell is a
host cycle through a central vertex; every later cell meets the embedded
part in one arc, so adding it means routing one ear between two embedded
branch vertices through unused host vertices, with the cell's new corners
placed on capable vertices along the way.  A miss only means "not found".
"""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass

import networkx as nx

from .graph import DomainError, Graph
from .planarity import faces, find_kuratowski, planar_embedding
from .hexgrid import HexGrid, HexSubdivision, build_hexgrid, iter_cell_order_ears, validate_hex_subdivision


@dataclass(frozen=True)
class SearchConfig:
    max_expansions: int | None = None  # total Dijkstra pops; default scales with 6r^2
    center_tries: int = 6  # the centre estimate can be off by a ring or two
    cycle_tries: int = 4
    sample_points: int = 12
    heavy_degree: int = 8  # vertices above this degree are ignored when ranking centers
    peel_limit: int = 6  # witness vertices dropped while the ranking graph is nonplanar
    guard_penalty: int = 3
    pass_through_penalty: int = 1  # routing past a branchy vertex without placing a corner there
    validate_topology: bool | None = None


class _OutOfBudget(Exception):
    pass


def two_core(g: Graph) -> set[int]:
    deg = {v: g.degree(v) for v in g}
    gone = set()
    stack = [v for v, d in deg.items() if d <= 1]
    while stack:
        v = stack.pop()
        if v in gone:
            continue
        gone.add(v)
        for u in g.neighbors(v):
            if u not in gone:
                deg[u] -= 1
                if deg[u] <= 1:
                    stack.append(u)
    return set(deg) - gone


def quick_reject(g: Graph, r: int) -> str | None:
    """A necessary condition that fails, or ``None``.

    H_r has ``6r^2`` vertices, ``6r(r-1)`` of them of degree three, and lies
    in the 2-core of any host containing it.
    """
    if g.n < 6 * r * r:
        return "too few vertices"
    core = two_core(g)
    branchy = sum(1 for v in core if sum(1 for u in g.neighbors(v) if u in core) >= 3)
    if branchy < 6 * r * (r - 1):
        return "too few vertices of degree three in the 2-core"
    return None


def find_hex_subdivision(g: Graph, r: int, config: SearchConfig | None = None) -> HexSubdivision | None:
    if r < 1:
        raise DomainError("hex grid radius must be at least 1")
    config = config or SearchConfig()
    if quick_reject(g, r) is not None:
        return None
    grid = build_hexgrid(r)
    limit = config.max_expansions if config.max_expansions is not None else 400 * 6 * r * r + 20000
    budget = [limit]
    try:
        if r == 1:
            return _single_cell(g, grid, budget)
        for cycle in _start_cycles(g, config, budget):
            found = _Growth(g, grid, config, budget).run(cycle)
            if found is not None:
                problems = validate_hex_subdivision(g, found, topological=config.validate_topology)
                if not problems:
                    return found
    except _OutOfBudget:
        return None
    return None


# -- r = 1 ------------------------------------------------------------------------


def _single_cell(g: Graph, grid: HexGrid, budget: list[int]) -> HexSubdivision | None:
    core = two_core(g)
    for s in sorted(core):
        path = [s]
        on_path = {s}
        stack = [iter(sorted(u for u in g.neighbors(s) if u in core))]
        while stack:
            budget[0] -= 1
            if budget[0] < 0:
                raise _OutOfBudget
            nxt = next(stack[-1], None)
            if nxt is None:
                stack.pop()
                on_path.discard(path.pop())
                continue
            if nxt == s and len(path) >= 6:
                return _cycle_subdivision(grid, path, list(range(6)))
            if nxt in on_path or nxt < s:
                continue
            path.append(nxt)
            on_path.add(nxt)
            stack.append(iter(sorted(u for u in g.neighbors(nxt) if u in core)))
    return None


def _cycle_subdivision(grid: HexGrid, cycle: list[int], positions: list[int]) -> HexSubdivision:
    """Map the center cell of ``grid`` onto ``cycle`` with corners at ``positions``."""
    corners = grid.corners((0, 0))
    L = len(cycle)
    bmap = {corners[i]: cycle[positions[i]] for i in range(6)}
    pmap = {}
    for i in range(6):
        a, b = corners[i], corners[(i + 1) % 6]
        s, t = positions[i], positions[(i + 1) % 6]
        seg = [cycle[(s + j) % L] for j in range(((t - s) % L) + 1)]
        pmap[(a, b) if a < b else (b, a)] = tuple(seg) if a < b else tuple(reversed(seg))
    return HexSubdivision(grid, bmap, pmap)


# -- choosing where to start ----------------------------------------------------------


def _skeleton(g: Graph, keep: set[int]) -> dict[int, set[int]]:
    """Degree-3+ vertices of ``g[keep]`` joined through chains of degree-2 vertices."""
    deg = {v: sum(1 for u in g.neighbors(v) if u in keep) for v in keep}
    nodes = {v for v in keep if deg[v] >= 3}
    adj: dict[int, set[int]] = {v: set() for v in nodes}
    for s in nodes:
        for u in g.neighbors(s):
            if u not in keep:
                continue
            prev, cur = s, u
            while cur not in nodes:
                nxt = [w for w in g.neighbors(cur) if w in keep and w != prev]
                if len(nxt) != 1:
                    cur = None
                    break
                prev, cur = cur, nxt[0]
                if cur == u:
                    cur = None
                    break
            if cur is not None and cur != s:
                adj[s].add(cur)
    return adj


def _drop_rare_short_cycles(adj: dict[int, set[int]], rare: float = 0.2) -> dict[int, set[int]]:
    """Remove edges on triangles or 4-cycles when only a few edges lie on them.

    In a lattice-like host a handful of chords would otherwise act as
    shortcuts and pull the distance-based center off target.
    """
    short = set()
    for u in adj:
        for v in adj[u]:
            if u > v:
                continue
            nu, nv = adj[u] - {v}, adj[v] - {u}
            if nu & nv or any(adj[x] & nv for x in nu):
                short.add((u, v))
    total = sum(len(ns) for ns in adj.values()) // 2
    if not short or len(short) > rare * total:
        return adj
    out = {v: set(ns) for v, ns in adj.items()}
    for u, v in short:
        out[u].discard(v)
        out[v].discard(u)
    return out


def _bfs_multi(adj: dict[int, set[int]], sources: set[int]) -> dict[int, int]:
    dist = dict.fromkeys(sources, 0)
    queue = deque(sorted(sources))
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def _bfs(adj: dict[int, set[int]], src: int) -> dict[int, int]:
    dist = {src: 0}
    queue = deque([src])
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def _centrality(g: Graph, config: SearchConfig) -> dict[int, tuple[int, int]]:
    """Per skeleton vertex: (minus depth below the outer face, distance sum); smaller is more central.

    Heavy vertices and pendant trees are ignored and degree-2 chains are
    suppressed, so subdivisions and apex-like hubs do not distort distances.
    While the rest is nonplanar, the highest-degree vertex of a Kuratowski
    witness is dropped too, up to ``peel_limit`` times.  Depth is the
    skeleton distance to the longest face of a planar embedding of what
    remains (zero everywhere when that remainder stays nonplanar).  The
    distance sum runs over far-apart sample points and breaks ties.
    """
    core = two_core(g)
    light = {v for v in core if g.degree(v) <= config.heavy_degree}
    light = two_core(g.induced_subgraph(light)) if light else set()
    for _ in range(config.peel_limit):
        w = find_kuratowski(g.induced_subgraph(light)) if light else None
        if w is None:
            break
        light.discard(max(sorted(w.vertices()), key=g.degree))
        light = two_core(g.induced_subgraph(light))
    adj = _drop_rare_short_cycles(_skeleton(g, light))
    if not adj:
        return {}
    seen: set[int] = set()
    best: list[int] = []
    for v in sorted(adj):
        if v in seen:
            continue
        comp = list(_bfs(adj, v))
        seen.update(comp)
        if len(comp) > len(best):
            best = comp
    d0 = _bfs(adj, min(best))
    far = max(sorted(d0), key=lambda v: d0[v])
    dists = [_bfs(adj, far)]
    nearest = dict(dists[0])
    for _ in range(config.sample_points - 1):
        nxt = max(sorted(nearest), key=lambda v: nearest[v])
        dn = _bfs(adj, nxt)
        dists.append(dn)
        for v in nearest:
            nearest[v] = min(nearest[v], dn[v])
    depth = dict.fromkeys(best, 0)
    rotation = planar_embedding(g.induced_subgraph(light))
    if rotation is not None:
        outer = max(faces(rotation), key=len)
        sources = {a for a, _ in outer} & set(best)
        if sources:
            depth = _bfs_multi(adj, sources)
    return {v: (-depth.get(v, 0), sum(d[v] for d in dists)) for v in best}


def _start_cycles(g: Graph, config: SearchConfig, budget: list[int]) -> list[list[int]]:
    """Candidate images of the center cell, most central first."""
    score = _centrality(g, config)
    if not score:
        return []
    anchors = sorted(score, key=lambda v: (score[v], v))[: config.center_tries]
    cycles: dict[frozenset[int], list[int]] = {}
    for a in anchors:
        for c in _cycles_through(g, a, config.cycle_tries, budget):
            cycles.setdefault(frozenset(c), c)
    worst = (1, max(s for _, s in score.values()) + 1)

    def rank(c: list[int]) -> tuple:
        vals = [score.get(v, worst) for v in c if g.degree(v) >= 3] or [worst]
        return (sum(x for x, _ in vals) / len(vals), sum(y for _, y in vals) / len(vals), len(c), c)

    return sorted(cycles.values(), key=rank)[: config.center_tries]


def _cycles_through(g: Graph, v: int, tries: int, budget: list[int]) -> list[list[int]]:
    """Short host cycles of length at least 6 through ``v``, shortest first.

    For each pair of neighbors, simple paths avoiding ``v`` and its other
    neighbors are enumerated in length order until one closes a long enough
    cycle.
    """
    found: dict[frozenset[int], list[int]] = {}
    nbrs = sorted(g.neighbors(v))
    h = g.to_networkx()
    for i, a in enumerate(nbrs):
        for b in nbrs[i + 1:]:
            view = nx.restricted_view(h, [v, *(set(nbrs) - {a, b})], [])
            try:
                for count, path in enumerate(nx.shortest_simple_paths(view, a, b)):
                    budget[0] -= len(path)
                    if budget[0] < 0:
                        raise _OutOfBudget
                    if len(path) + 1 >= 6:
                        cyc = [v] + path
                        found.setdefault(frozenset(cyc), cyc)
                        break
                    if count >= 30:
                        break
            except nx.NetworkXNoPath:
                continue
    cycles = sorted(found.values(), key=lambda c: (len(c), c))
    return cycles[: tries * 4]


# -- growth -----------------------------------------------------------------------------


class _Growth:
    def __init__(self, g: Graph, grid: HexGrid, config: SearchConfig, budget: list[int]) -> None:
        self.g = g
        self.grid = grid
        self.config = config
        self.budget = budget
        self.used: set[int] = set()
        self.image: dict[int, int] = {}
        self.remaining: dict[int, int] = {}
        self.hungry: dict[int, int] = {}  # host image -> remaining abstract degree
        self.paths: dict[tuple[int, int], tuple[int, ...]] = {}
        gg = grid.graph
        self.abs_degree = {v: gg.degree(v) for v in gg}

    def free_count(self, h: int) -> int:
        used = self.used
        return sum(1 for u in self.g.neighbors(h) if u not in used)

    def run(self, cycle: list[int]) -> HexSubdivision | None:
        positions = self._center_positions(cycle)
        if positions is None:
            return None
        first = _cycle_subdivision(self.grid, cycle, positions)
        for v, h in first.branch_map.items():
            self.image[v] = h
            self.remaining[v] = self.abs_degree[v] - 2
        for e, p in first.path_map.items():
            self.paths[e] = p
        self.used.update(cycle)
        for v, h in self.image.items():
            if self.remaining[v] > 0:
                self.hungry[h] = self.remaining[v]
        if any(self.free_count(h) < self.remaining[v] for v, h in self.image.items()):
            return None
        ears = iter_cell_order_ears(self.grid)
        next(ears)
        for _cell, run, new in ears:
            if len(run) < 2:
                return None
            if not self._add_ear(run[-1], new, run[0]):
                return None
        return HexSubdivision(self.grid, dict(self.image), dict(self.paths))

    def _center_positions(self, cycle: list[int]) -> list[int] | None:
        on = set(cycle)
        capable = [i for i, h in enumerate(cycle) if any(u not in on for u in self.g.neighbors(h))]
        if len(capable) < 6:
            return None
        if len(capable) == 6:
            return capable
        L = len(cycle)
        chosen: list[int] = []
        for t in range(6):
            target = t * L / 6
            pick = min((i for i in capable if i not in chosen), key=lambda i: (abs(i - target), i))
            chosen.append(pick)
        return sorted(chosen)

    def _cost(self, w: int, ends: tuple[int, int]) -> int | None:
        g = self.g
        d = g.degree(w)
        cost = 1 + max(0, d - 3)
        if d <= self.config.heavy_degree:
            for y in g.neighbors(w):
                need = self.hungry.get(y)
                if need is None or y in ends:
                    continue
                if self.free_count(y) <= need:
                    return None
                cost += self.config.guard_penalty
        return cost

    def _route(self, A: int, B: int, needs: list[int], banned: set[int]) -> list[tuple[int, bool]] | None:
        """Cheapest path A -> B placing ``len(needs)`` corners; entries are (vertex, placed)."""
        g, used = self.g, self.used
        m = len(needs)
        if m == 0 and g.has_edge(A, B):
            return [(A, False), (B, False)]
        ends = (A, B)
        dist: dict[tuple[int, int], int] = {}
        parent: dict[tuple[int, int], tuple[int, int] | None] = {}
        heap: list[tuple[int, int, int, int]] = []
        cost_cache: dict[int, int | None] = {}

        def cost(w: int) -> int | None:
            if w not in cost_cache:
                cost_cache[w] = self._cost(w, ends)
            return cost_cache[w]

        def push(state: tuple[int, int], d: int, par: tuple[int, int] | None) -> None:
            if d < dist.get(state, 1 << 60):
                dist[state] = d
                parent[state] = par
                heapq.heappush(heap, (d, state[1] * -1, state[0], state[1]))

        def waste(w: int) -> int:
            return self.config.pass_through_penalty if g.degree(w) >= 3 else 0

        def placeable(w: int, j: int) -> bool:
            # the ear's own endpoints may serve as path neighbors
            nb = g.neighbors(w)
            return self.free_count(w) + (A in nb) + (B in nb) >= needs[j]

        for u in sorted(g.neighbors(A)):
            if u in used or u in banned or u == B:
                continue
            c = cost(u)
            if c is None:
                continue
            push((u, 0), c + waste(u), None)
            if m and placeable(u, 0):
                push((u, 1), c, None)
        pops = 0
        while heap:
            d, _, u, j = heapq.heappop(heap)
            if d > dist.get((u, j), 1 << 60):
                continue
            pops += 1
            self.budget[0] -= 1
            if self.budget[0] < 0:
                raise _OutOfBudget
            if pops > 50000:
                return None
            if j == m and g.has_edge(u, B):
                seq = []
                state: tuple[int, int] | None = (u, j)
                while state is not None:
                    par = parent[state]
                    placed = state[1] > (par[1] if par is not None else 0)
                    seq.append((state[0], placed))
                    state = par
                seq.reverse()
                return [(A, False)] + seq + [(B, False)]
            on_route = set()
            state = (u, j)
            while state is not None:
                on_route.add(state[0])
                state = parent[state]
            for w in g.neighbors(u):
                if w in used or w in banned or w == B or w in on_route:
                    continue
                c = cost(w)
                if c is None:
                    continue
                push((w, j), d + c + waste(w), (u, j))
                if j < m and placeable(w, j):
                    push((w, j + 1), d + c, (u, j))
        return None

    def _add_ear(self, a: int, new: list[int], b: int) -> bool:
        A, B = self.image[a], self.image[b]
        needs = [self.abs_degree[n] for n in new]
        banned: set[int] = set()
        for _ in range(3):
            route = self._route(A, B, needs, banned)
            if route is None:
                return False
            verts = [v for v, _ in route]
            if len(set(verts)) == len(verts):
                break
            repeated = {v for v in verts if verts.count(v) > 1}
            banned |= repeated
        else:
            return False
        # split at placed vertices
        chain = [a] + new + [b]
        segs: list[list[int]] = [[A]]
        k = 1
        for v, placed in route[1:]:
            segs[-1].append(v)
            if placed:
                self.image[chain[k]] = v
                k += 1
                segs.append([v])
        if k != len(chain) - 1:
            return False
        for i, seg in enumerate(segs):
            x, y = chain[i], chain[i + 1]
            key = (x, y) if x < y else (y, x)
            self.paths[key] = tuple(seg) if x < y else tuple(reversed(seg))
        self.used.update(verts)
        self.remaining[a] -= 1
        self.remaining[b] -= 1
        for n in new:
            self.remaining[n] = self.abs_degree[n] - 2
        for v in [a, b, *new]:
            h = self.image[v]
            if self.remaining[v] > 0:
                self.hungry[h] = self.remaining[v]
            else:
                self.hungry.pop(h, None)
        # embedded vertices next to the new route must keep enough exits
        touched = {y for v in verts for y in self.g.neighbors(v) if y in self.hungry}
        return all(self.free_count(h) >= self.hungry[h] for h in touched)
