"""Exact apex-set search and its brute-force oracle.

Every apex set meets every Kuratowski subdivision, so branching on the
vertices of one witness is exhaustive.  Sibling branches protect the
vertices already tried, which turns the search tree into a partition of the
candidate sets.
"""

from __future__ import annotations

import time
from collections.abc import Iterable
from dataclasses import asdict, dataclass, field
from itertools import combinations
from math import comb

from .graph import DomainError, Graph, ResourceLimitError
from .planarity import embedding_is_planar, find_kuratowski, is_planar, planar_embedding, validate_kuratowski

FEASIBLE = "feasible"
INFEASIBLE = "infeasible"
RESOURCE_LIMIT = "resource-limit"

EDGE_BOUND = "edge-bound"
FORCED_EXCEEDS_K = "forced-exceeds-k"
NO_FLAT_NO_WELL_ATTACHED = "no-flat-zone-no-wellattached"
EXHAUSTED = "exhausted-search"


@dataclass
class Stats:
    iterations: int = 0
    reductions_a: int = 0
    reductions_b: int = 0
    solver_nodes: int = 0
    wall_ms: float = 0.0


@dataclass
class ApexOutcome:
    status: str
    apex_set: frozenset[int] = frozenset()
    forced_set: frozenset[int] = frozenset()
    justification: str | None = None
    stats: Stats = field(default_factory=Stats)

    @property
    def feasible(self) -> bool:
        return self.status == FEASIBLE

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "apex_set": sorted(self.apex_set),
            "forced_set": sorted(self.forced_set),
            "justification": self.justification,
            "stats": {**asdict(self.stats), "wall_ms": round(self.stats.wall_ms, 3)},
        }


def verify_solution(g: Graph, x: Iterable[int], k: int) -> bool:
    x = frozenset(x)
    if not x <= g.vertices():
        raise DomainError(f"apex candidates {sorted(x - g.vertices())} not in graph")
    return len(x) <= k and is_planar(g.delete_vertices(x))


class _Budget:
    def __init__(self, node_budget: int | None, time_budget_ms: float | None) -> None:
        self.nodes = 0
        self.node_budget = node_budget
        self.deadline = None if time_budget_ms is None else time.monotonic() + time_budget_ms / 1000

    def tick(self) -> None:
        self.nodes += 1
        if self.node_budget is not None and self.nodes > self.node_budget:
            raise ResourceLimitError("node-budget")
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise ResourceLimitError("time-budget")


def _packing_exceeds(g: Graph, first_witness_vertices: frozenset[int], budget: int) -> bool:
    """True when more than ``budget`` vertex-disjoint Kuratowski subdivisions exist."""
    found = 1
    h = g.delete_vertices(first_witness_vertices)
    while found <= budget:
        w = find_kuratowski(h)
        if w is None:
            return False
        found += 1
        h = h.delete_vertices(w.vertices())
    return True


def solve_exact(
    g: Graph,
    k: int,
    *,
    protected: Iterable[int] = (),
    node_budget: int | None = None,
    time_budget_ms: float | None = None,
    debug: bool = False,
) -> ApexOutcome:
    """Decide whether at most ``k`` vertices outside ``protected`` make ``g`` planar.

    Status is ``resource-limit`` when a budget runs out; that status never
    means infeasible.
    """
    if k < 0:
        raise DomainError("k must be nonnegative")
    start = time.perf_counter()
    budget = _Budget(node_budget, time_budget_ms)
    base_protected = frozenset(protected)
    # deleted set -> protected set it failed under (failure transfers to supersets of that set)
    failed: dict[frozenset[int], frozenset[int]] = {}

    def search(h: Graph, deleted: frozenset[int], left: int, banned: frozenset[int]) -> frozenset[int] | None:
        budget.tick()
        seen = failed.get(deleted)
        if seen is not None and seen <= banned:
            return None
        if left == 0:
            if is_planar(h):
                return deleted
            failed[deleted] = banned
            return None
        w = find_kuratowski(h)
        if w is None:
            return deleted
        if debug:
            problems = validate_kuratowski(h, w)
            assert not problems, problems
            assert not is_planar(h), "branch node with planar graph"
        result = None
        wv = w.vertices()
        candidates = sorted((v for v in wv if v not in banned), key=lambda v: (-h.degree(v), v))
        if candidates and not (left <= 2 and _packing_exceeds(h, wv, left)):
            tried = banned
            for v in candidates:
                result = search(h.delete_vertices((v,)), deleted | {v}, left - 1, tried)
                if result is not None:
                    break
                tried = tried | {v}
        if result is None:
            failed[deleted] = banned
        return result

    stats = Stats()
    try:
        found = search(g, frozenset(), k, base_protected)
    except ResourceLimitError as exc:
        stats.solver_nodes = budget.nodes
        stats.wall_ms = (time.perf_counter() - start) * 1000
        return ApexOutcome(RESOURCE_LIMIT, justification=str(exc), stats=stats)
    stats.solver_nodes = budget.nodes
    stats.wall_ms = (time.perf_counter() - start) * 1000
    if found is None:
        return ApexOutcome(INFEASIBLE, justification=EXHAUSTED, stats=stats)
    return ApexOutcome(FEASIBLE, apex_set=found, stats=stats)


def brute_force_oracle(g: Graph, k: int, *, limit: int = 2_000_000) -> ApexOutcome:
    """Try every vertex set of size at most ``k`` in lexicographic order.

    The first planar deletion wins; its planarity is re-certified through a
    checked embedding before it is returned.
    """
    vs = g.sorted_vertices()
    total = sum(comb(len(vs), i) for i in range(min(k, len(vs)) + 1))
    if total > limit:
        raise ResourceLimitError(f"{total} subsets exceed oracle limit {limit}")
    stats = Stats()
    for size in range(min(k, len(vs)) + 1):
        for x in combinations(vs, size):
            stats.solver_nodes += 1
            h = g.delete_vertices(x)
            if is_planar(h):
                rotation = planar_embedding(h)
                if rotation is None or not embedding_is_planar(h, rotation):
                    raise AssertionError(f"planarity test and embedding disagree after deleting {x}")
                return ApexOutcome(FEASIBLE, apex_set=frozenset(x), stats=stats)
    return ApexOutcome(INFEASIBLE, justification=EXHAUSTED, stats=stats)


def all_apex_sets(g: Graph, k: int, *, limit: int = 2_000_000) -> list[frozenset[int]]:
    """Every apex set of size at most ``k`` (test oracle for forcing properties)."""
    vs = g.sorted_vertices()
    total = sum(comb(len(vs), i) for i in range(min(k, len(vs)) + 1))
    if total > limit:
        raise ResourceLimitError(f"{total} subsets exceed oracle limit {limit}")
    return [
        frozenset(x)
        for size in range(min(k, len(vs)) + 1)
        for x in combinations(vs, size)
        if is_planar(g.delete_vertices(x))
    ]


def minimum_apex_size(g: Graph, k_max: int, **kw) -> int | None:
    """Smallest ``k <= k_max`` with a feasible exact solve, ``None`` when none is."""
    for k in range(k_max + 1):
        out = solve_exact(g, k, **kw)
        if out.status == RESOURCE_LIMIT:
            raise ResourceLimitError(out.justification or "budget")
        if out.feasible:
            return k
    return None
