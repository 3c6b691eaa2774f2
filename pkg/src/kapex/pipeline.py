"""Reduce-then-solve driver.

Phase I alternates grid search with the two reductions while keeping the
forced set ``W``; Phase II hands the reduced graph and budget ``k - |W|`` to
the exact solver.  A feasible answer is always re-verified on the original
graph before it is returned, and no branch concludes infeasibility from a
failed grid search.
"""

from __future__ import annotations

import time
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .constants import Constants, largest_q_fitting
from .graph import DomainError, Graph, edge_count_prefilter
from .hexsearch import SearchConfig, find_hex_subdivision
from .solver import (
    EDGE_BOUND,
    EXHAUSTED,
    FEASIBLE,
    FORCED_EXCEEDS_K,
    INFEASIBLE,
    NO_FLAT_NO_WELL_ATTACHED,
    RESOURCE_LIMIT,
    ApexOutcome,
    Stats,
    solve_exact,
    verify_solution,
)
from .treewidth import DecompositionReport, heuristic_decompose, width_budget
from .wellattached import enumerate_disjoint_blocks, find_well_attached, reduction_b
from .zones import ComponentIndex, Zone, ZoneLayout, is_flat, layout_zones, reduction_a

MODES = ("auto", "exact-only", "phase1+2")
CONSTANTS = ("paper", "reduced")


@dataclass
class PipelineConfig:
    mode: str = "auto"
    constants: str = "paper"
    node_budget: int | None = None
    time_budget_ms: float | None = None
    max_iterations: int | None = None
    threads: int = 1
    reduced_q: int | None = None  # zone lattice size in reduced mode; default fits the input
    search: SearchConfig | None = None
    # Conclude infeasibility when no zone is flat and nothing is well-attached.
    # Off by default: detection only covers one block family (see wellattached).
    infer_infeasible_when_stuck: bool = False
    decompose_limit: int = 20000  # skip the diagnostic decomposition above this many vertices
    # called as observer(action, before, after, forced) after every reduction
    observer: Callable[[str, Graph, Graph, frozenset[int]], None] | None = None

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise DomainError(f"mode must be one of {MODES}")
        if self.constants not in CONSTANTS:
            raise DomainError(f"constants must be one of {CONSTANTS}")
        if self.threads < 1:
            raise DomainError("threads must be positive")
        for name in ("node_budget", "time_budget_ms", "max_iterations"):
            value = getattr(self, name)
            if value is not None and value <= 0:
                raise DomainError(f"{name} must be positive")


@dataclass
class LogEntry:
    iteration: int
    action: str  # grid-found | reduction-a | reduction-b | fallback
    detail: dict = field(default_factory=dict)


@dataclass
class PipelineState:
    original: Graph
    k: int
    graph: Graph
    forced: frozenset[int] = frozenset()
    constants: Constants | None = None
    log: list[LogEntry] = field(default_factory=list)
    decomposition: DecompositionReport | None = None

    @property
    def budget_left(self) -> int:
        return self.k - len(self.forced)

    def check(self) -> None:
        """Bookkeeping invariants: the forced set fits the budget and left the graph."""
        assert len(self.forced) <= self.k, "forced set exceeds k"
        assert not (self.forced & self.graph.vertices()), "forced vertex still present"
        assert self.graph.vertices() <= self.original.vertices()

    def record(self, iteration: int, action: str, **detail) -> None:
        self.log.append(LogEntry(iteration, action, detail))


class _OutOfTime(Exception):
    pass


def choose_constants(g: Graph, k: int, config: PipelineConfig) -> Constants | None:
    """Zone constants for this input, or ``None`` when Phase I cannot apply."""
    if config.constants == "paper":
        return Constants.paper(k) if k >= 2 else None
    if k < 1:
        return None
    q = config.reduced_q if config.reduced_q is not None else largest_q_fitting(g.n, k)
    return None if q is None else Constants.reduced(k, q)


def run_pipeline(g: Graph, k: int, config: PipelineConfig | None = None) -> ApexOutcome:
    return run_pipeline_traced(g, k, config)[0]


def run_pipeline_traced(g: Graph, k: int, config: PipelineConfig | None = None) -> tuple[ApexOutcome, PipelineState]:
    if k < 0:
        raise DomainError("k must be nonnegative")
    config = config or PipelineConfig()
    start = time.perf_counter()
    deadline = None if config.time_budget_ms is None else start + config.time_budget_ms / 1000
    state = PipelineState(g, k, g)
    stats = Stats()

    def finish(outcome: ApexOutcome) -> tuple[ApexOutcome, PipelineState]:
        outcome.stats.iterations = stats.iterations
        outcome.stats.reductions_a = stats.reductions_a
        outcome.stats.reductions_b = stats.reductions_b
        outcome.stats.solver_nodes += stats.solver_nodes
        outcome.stats.wall_ms = (time.perf_counter() - start) * 1000
        if outcome.feasible and not verify_solution(g, outcome.apex_set, k):
            raise AssertionError("feasible outcome failed verification on the original graph")
        return outcome, state

    def remaining_ms() -> float | None:
        if deadline is None:
            return None
        left = (deadline - time.perf_counter()) * 1000
        if left <= 0:
            raise _OutOfTime
        return left

    def phase2(h: Graph, budget: int) -> ApexOutcome:
        out = solve_exact(h, budget, node_budget=config.node_budget, time_budget_ms=remaining_ms())
        if out.status == RESOURCE_LIMIT:
            return out
        if out.status == INFEASIBLE:
            return ApexOutcome(INFEASIBLE, forced_set=state.forced, justification=EXHAUSTED, stats=out.stats)
        return ApexOutcome(FEASIBLE, apex_set=out.apex_set | state.forced, forced_set=state.forced, stats=out.stats)

    try:
        constants = None
        if config.mode != "exact-only" and (k >= 2 or config.mode == "phase1+2"):
            if k >= 2 and edge_count_prefilter(g, k) == "reject":
                return finish(ApexOutcome(INFEASIBLE, justification=EDGE_BOUND))
            constants = choose_constants(g, k, config)
        state.constants = constants
        if constants is not None:
            outcome = _phase1(state, constants, config, stats, remaining_ms)
            if outcome is not None:
                return finish(outcome)
        out = phase2(state.graph, state.budget_left)
        if out.feasible and not verify_solution(g, out.apex_set, k):
            # only reachable if a reduction under reduced constants was unsafe
            state.record(stats.iterations, "fallback", reason="verification-failed")
            stats.solver_nodes += out.stats.solver_nodes
            state.forced = frozenset()
            state.graph = g
            out = phase2(g, k)
        return finish(out)
    except _OutOfTime:
        return finish(ApexOutcome(RESOURCE_LIMIT, forced_set=state.forced, justification="time-budget"))


def _phase1(state: PipelineState, constants: Constants, config: PipelineConfig, stats: Stats, remaining_ms) -> ApexOutcome | None:
    """Run the reduction loop; an outcome is returned only for a proven infeasibility or a budget stop."""
    k = state.k
    r = constants.radius
    while True:
        remaining_ms()
        if config.max_iterations is not None and stats.iterations >= config.max_iterations:
            return ApexOutcome(RESOURCE_LIMIT, forced_set=state.forced, justification="iteration-budget")
        stats.iterations += 1
        it = stats.iterations
        g = state.graph
        sub = find_hex_subdivision(g, r, config.search)
        if sub is None:
            report = DecompositionReport(width_budget(r, k))
            if g.n <= config.decompose_limit:
                td = heuristic_decompose(g, report.target)
                report.width = None if td is None else td.width
            else:
                report.attempted = False
            state.decomposition = report
            state.record(it, "fallback", reason="no-grid", width=report.width, target=report.target)
            return None
        state.record(it, "grid-found", radius=r)
        layout = layout_zones(sub, constants)
        index = ComponentIndex.build(g, layout)
        flat = _first_flat(g, layout, index, config.threads)
        if flat is not None:
            before = g.n
            state.graph = reduction_a(g, layout, flat, index)
            stats.reductions_a += 1
            state.record(it, "reduction-a", zone=flat.id, deleted=before - state.graph.n)
            if config.observer is not None:
                config.observer("reduction-a", g, state.graph, state.forced)
            state.check()
            continue
        blocks = enumerate_disjoint_blocks(layout, k)
        u = find_well_attached(g, layout, k, blocks, threads=config.threads)
        if not u:
            if config.infer_infeasible_when_stuck and constants.trusted:
                return ApexOutcome(INFEASIBLE, forced_set=state.forced, justification=NO_FLAT_NO_WELL_ATTACHED)
            state.record(it, "fallback", reason="no-flat-zone-no-wellattached", trusted=constants.trusted)
            return None
        if len(state.forced) + len(u) > k:
            return ApexOutcome(INFEASIBLE, forced_set=state.forced | frozenset(u), justification=FORCED_EXCEEDS_K)
        state.graph = reduction_b(g, layout, u, k)
        state.forced = state.forced | frozenset(u)
        stats.reductions_b += 1
        state.record(it, "reduction-b", vertices=sorted(u))
        if config.observer is not None:
            config.observer("reduction-b", g, state.graph, state.forced)
        state.check()


def _first_flat(g: Graph, layout: ZoneLayout, index: ComponentIndex, threads: int) -> Zone | None:
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            flags = list(pool.map(lambda z: is_flat(g, layout, z, index), layout.zones))
        return next((z for z, f in zip(layout.zones, flags) if f), None)
    return next((z for z in layout.zones if is_flat(g, layout, z, index)), None)
