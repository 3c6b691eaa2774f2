from __future__ import annotations

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import from_nx, graphs, k5, k33
from kapex.graph import DomainError, Graph, complete_graph, grid_graph
from kapex.solver import (
    EXHAUSTED,
    RESOURCE_LIMIT,
    all_apex_sets,
    brute_force_oracle,
    minimum_apex_size,
    solve_exact,
    verify_solution,
)
from oracles import brute_force_apex_sets, brute_force_min_apex, nx_planar


def two_k5s() -> Graph:
    return k5().with_edges(complete_graph(5, start=10).edges())


@pytest.mark.parametrize(
    "g, k, feasible",
    [
        (complete_graph(6), 1, False),
        (complete_graph(6), 2, True),
        (k5(), 0, False),
        (k5(), 1, True),
        (k33(), 1, True),
        (two_k5s(), 1, False),
        (two_k5s(), 2, True),
        (grid_graph(4, 4), 0, True),
        (Graph(), 0, True),
    ],
)
def test_examples(g, k, feasible):
    out = solve_exact(g, k)
    assert out.feasible == feasible
    if feasible:
        assert verify_solution(g, out.apex_set, k)
        assert nx_planar(g.delete_vertices(out.apex_set))
    else:
        assert out.justification == EXHAUSTED


def test_two_k5s_needs_one_vertex_from_each():
    out = solve_exact(two_k5s(), 2)
    assert len(out.apex_set & set(range(5))) == 1 and len(out.apex_set & set(range(10, 15))) == 1


def test_verify_solution_rules():
    g = k5()
    assert verify_solution(g, [0], 1)
    assert not verify_solution(g, [0], 0)
    assert not verify_solution(g, [], 1)
    with pytest.raises(DomainError):
        verify_solution(g, [9], 1)


def test_negative_k_rejected():
    with pytest.raises(DomainError):
        solve_exact(k5(), -1)


def test_protected_vertices_are_never_chosen():
    g = complete_graph(6)
    out = solve_exact(g, 2, protected={0, 1, 2})
    assert out.feasible and not out.apex_set & {0, 1, 2}
    assert not solve_exact(g, 2, protected={0, 1, 2, 3, 4}).feasible


def test_node_budget_reports_resource_limit():
    g = from_nx(nx.gnm_random_graph(14, 45, seed=3))
    out = solve_exact(g, 4, node_budget=2)
    assert out.status == RESOURCE_LIMIT and out.justification == "node-budget"
    assert not out.apex_set


def test_time_budget_reports_resource_limit():
    g = from_nx(nx.gnm_random_graph(40, 400, seed=1))
    out = solve_exact(g, 8, time_budget_ms=0)
    assert out.status == RESOURCE_LIMIT and out.justification == "time-budget"


def test_debug_mode_agrees(graphs8):
    for g in graphs8[::37]:
        for k in range(3):
            assert solve_exact(g, k, debug=True).feasible == solve_exact(g, k).feasible


@settings(max_examples=200)
@given(graphs(max_vertices=9), st.integers(0, 3))
def test_agrees_with_brute_force(g, k):
    out = solve_exact(g, k)
    expected = brute_force_min_apex(g, k)
    assert out.feasible == (expected is not None)
    assert out.feasible == brute_force_oracle(g, k).feasible
    if out.feasible:
        assert len(out.apex_set) <= k and nx_planar(g.delete_vertices(out.apex_set))


@settings(max_examples=100)
@given(graphs(max_vertices=9), st.integers(0, 2))
def test_feasibility_is_monotone_in_k(g, k):
    if solve_exact(g, k).feasible:
        assert solve_exact(g, k + 1).feasible


@settings(max_examples=100)
@given(graphs(max_vertices=9), st.data())
def test_adding_edges_never_helps(g, data):
    vs = g.sorted_vertices()
    if len(vs) < 2:
        return
    u, v = data.draw(st.lists(st.sampled_from(vs), min_size=2, max_size=2, unique=True))
    h = g.with_edges([(u, v)])
    assert minimum_apex_size(g, g.n) <= minimum_apex_size(h, h.n)


@settings(max_examples=60)
@given(graphs(max_vertices=8), st.integers(0, 2))
def test_all_apex_sets_matches_oracle(g, k):
    assert set(all_apex_sets(g, k)) == set(brute_force_apex_sets(g, k))


def test_every_small_graph_agrees(graphs8):
    for g in graphs8[::5]:
        expected = brute_force_min_apex(g, 3)
        assert minimum_apex_size(g, 3) == expected
