"""Tree decompositions: validation, elimination-order heuristics, exact DP.

The heuristics only ever certify upper bounds.  A ``None`` from
:func:`heuristic_decompose` says nothing about the true treewidth.
"""

from __future__ import annotations

import heapq
from collections import deque
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from functools import lru_cache
from typing import IO

from .graph import DomainError, Graph

EXACT_LIMIT = 14


@dataclass(frozen=True)
class TreeDecomposition:
    bags: dict[int, frozenset[int]]
    tree_edges: tuple[tuple[int, int], ...] = ()

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags.values()), default=0) - 1

    def to_pace(self, out: IO[str], num_vertices: int) -> None:
        """Write the PACE ``.td`` format: ``s td`` line, ``b`` lines, tree edges.

        Bags are renumbered 1..N in key order; vertex ids are written as-is.
        """
        ids = {b: i for i, b in enumerate(sorted(self.bags), 1)}
        out.write(f"s td {len(self.bags)} {self.width + 1} {num_vertices}\n")
        for b in sorted(self.bags):
            out.write(" ".join(["b", str(ids[b]), *map(str, sorted(self.bags[b]))]) + "\n")
        for a, b in self.tree_edges:
            out.write(f"{ids[a]} {ids[b]}\n")


@dataclass(frozen=True)
class Validation:
    valid: bool
    condition: str | None = None
    witness: object = None
    message: str = ""

    def __bool__(self) -> bool:
        return self.valid


def _is_tree(nodes: Iterable[int], edges: Sequence[tuple[int, int]]) -> bool:
    nodes = list(nodes)
    if not nodes:
        return not edges
    if len(edges) != len(nodes) - 1:
        return False
    adj: dict[int, list[int]] = {v: [] for v in nodes}
    for a, b in edges:
        if a not in adj or b not in adj:
            return False
        adj[a].append(b)
        adj[b].append(a)
    seen = {nodes[0]}
    queue = deque([nodes[0]])
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return len(seen) == len(nodes)


def validate_decomposition(g: Graph, td: TreeDecomposition) -> Validation:
    """Check the three tree-decomposition conditions, reporting the first failure."""
    if not _is_tree(td.bags, td.tree_edges):
        return Validation(False, "tree", None, "bag graph is not a tree")
    stray = set().union(*td.bags.values()) - g.vertices() if td.bags else set()
    if stray:
        return Validation(False, "bags", min(stray), f"bag vertex {min(stray)} not in graph")
    holders: dict[int, list[int]] = {}
    for b, bag in td.bags.items():
        for v in bag:
            holders.setdefault(v, []).append(b)
    for v in g.sorted_vertices():
        if v not in holders:
            return Validation(False, "vertex-cover", v, f"vertex {v} is in no bag")
    for u, v in g.edges():
        if not any(u in td.bags[b] for b in holders[v]):
            return Validation(False, "edge-cover", (u, v), f"edge {u}-{v} is in no bag")
    adj: dict[int, list[int]] = {b: [] for b in td.bags}
    for a, b in td.tree_edges:
        adj[a].append(b)
        adj[b].append(a)
    for v in g.sorted_vertices():
        own = set(holders[v])
        start = holders[v][0]
        seen = {start}
        queue = deque([start])
        while queue:
            x = queue.popleft()
            for y in adj[x]:
                if y in own and y not in seen:
                    seen.add(y)
                    queue.append(y)
        if seen != own:
            return Validation(False, "coherence", v, f"bags holding {v} are not connected")
    return Validation(True)


def trivial_decomposition(g: Graph) -> TreeDecomposition:
    return TreeDecomposition({0: g.vertices()})


def decomposition_from_ordering(g: Graph, order: Sequence[int]) -> TreeDecomposition:
    """Build the decomposition induced by eliminating vertices in ``order``."""
    if sorted(order) != g.sorted_vertices():
        raise DomainError("ordering must list every vertex exactly once")
    if not order:
        return TreeDecomposition({0: frozenset()})
    pos = {v: i for i, v in enumerate(order)}
    adj = {v: set(g.neighbors(v)) for v in g}
    bags: dict[int, frozenset[int]] = {}
    parent: dict[int, int] = {}
    for i, v in enumerate(order):
        later = adj[v]
        bags[i] = frozenset(later | {v})
        for a in later:
            adj[a].discard(v)
            adj[a].update(later - {a})
        if later:
            parent[i] = min(pos[a] for a in later)
    edges = [(i, p) for i, p in parent.items()]
    # join the per-component trees
    roots = [i for i in range(len(order)) if i not in parent]
    edges.extend((roots[j], roots[j + 1]) for j in range(len(roots) - 1))
    return TreeDecomposition(bags, tuple(edges))


def _elimination_order(g: Graph, criterion: str) -> list[int]:
    adj = {v: set(g.neighbors(v)) for v in g}
    order = []
    remaining = set(adj)

    def fill(v: int) -> int:
        ns = list(adj[v])
        missing = 0
        for i, a in enumerate(ns):
            na = adj[a]
            for b in ns[i + 1:]:
                if b not in na:
                    missing += 1
        return missing

    def score(v: int) -> tuple[int, ...]:
        return (len(adj[v]), v) if criterion == "min-degree" else (fill(v), len(adj[v]), v)

    # lazy heap: an entry is live only while it equals the vertex's current score
    current = {v: score(v) for v in adj}
    heap = list(current.values())
    heapq.heapify(heap)
    while remaining:
        while True:
            key = heapq.heappop(heap)
            v = key[-1]
            if v in remaining and current[v] == key:
                break
        ns = adj.pop(v)
        remaining.discard(v)
        for a in ns:
            adj[a].discard(v)
            adj[a].update(ns - {a})
        # degrees change only on ns; fill can also change one step further out
        touched = set(ns)
        if criterion != "min-degree":
            for a in ns:
                touched |= adj[a]
        for a in touched:
            key = score(a)
            if key != current[a]:
                current[a] = key
                heapq.heappush(heap, key)
        order.append(v)
    return order


def min_degree_ordering(g: Graph) -> list[int]:
    return _elimination_order(g, "min-degree")


def min_fill_ordering(g: Graph) -> list[int]:
    return _elimination_order(g, "min-fill")


def heuristic_decompose(
    g: Graph, target_width: int, *, max_fill_vertices: int = 1000, exact_below: int = 10
) -> TreeDecomposition | None:
    """Best of the min-degree and min-fill decompositions, if its width is within target.

    Min-fill is skipped above ``max_fill_vertices`` vertices, where its fill
    counts get expensive.  When both orderings miss the target on a graph of
    at most ``exact_below`` vertices, the exact ordering is tried as well.
    """
    candidates = [decomposition_from_ordering(g, min_degree_ordering(g))]
    if g.n <= max_fill_vertices:
        candidates.append(decomposition_from_ordering(g, min_fill_ordering(g)))
    best = min(candidates, key=lambda td: td.width)
    if best.width > target_width and g.n <= min(exact_below, EXACT_LIMIT):
        best = decomposition_from_ordering(g, exact_treewidth(g)[1])
    return best if best.width <= target_width else None


def exact_treewidth(g: Graph) -> tuple[int, list[int]]:
    """Exact treewidth by dynamic programming over vertex subsets (|V| <= 14).

    Returns the width and an optimal elimination ordering.
    """
    if g.n > EXACT_LIMIT:
        raise DomainError(f"exact treewidth is limited to {EXACT_LIMIT} vertices")
    vs = g.sorted_vertices()
    if not vs:
        return -1, []
    idx = {v: i for i, v in enumerate(vs)}
    nbr = [sum(1 << idx[w] for w in g.neighbors(v)) for v in vs]
    n = len(vs)
    full = (1 << n) - 1

    def q_size(eliminated: int, v: int) -> int:
        # vertices outside eliminated|v reachable from v through eliminated
        seen = 1 << v
        frontier = 1 << v
        reach = 0
        while frontier:
            i = (frontier & -frontier).bit_length() - 1
            frontier &= frontier - 1
            out = nbr[i] & ~seen
            seen |= out
            inside = out & eliminated
            frontier |= inside
            reach |= out & ~eliminated
        return bin(reach).count("1")

    @lru_cache(maxsize=None)
    def tw(s: int) -> tuple[int, int]:
        if s == 0:
            return -1, -1
        best, best_v = n, -1
        rest = s
        while rest:
            i = (rest & -rest).bit_length() - 1
            rest &= rest - 1
            prev = s & ~(1 << i)
            cost = max(tw(prev)[0], q_size(prev, i))
            if cost < best:
                best, best_v = cost, i
        return best, best_v

    width = tw(full)[0]
    order = []
    s = full
    while s:
        i = tw(s)[1]
        order.append(vs[i])
        s &= ~(1 << i)
    order.reverse()
    tw.cache_clear()
    return width, order


def width_budget(r: int, k: int) -> int:
    """Width at which the grid search takes over: ``24r - 11 + k``."""
    if r < 1 or k < 0:
        raise DomainError("need r >= 1 and k >= 0")
    return 24 * r - 11 + k


@dataclass
class DecompositionReport:
    target: int
    width: int | None = None
    attempted: bool = True
    notes: list[str] = field(default_factory=list)
