from __future__ import annotations

import io
from itertools import combinations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import graphs, k5
from kapex.graph import (
    MAX_VERTEX_ID,
    CapacityError,
    DomainError,
    Graph,
    ParseError,
    complete_graph,
    connected_components,
    delete_vertices,
    edge_count_prefilter,
    load_graph,
    write_dimacs,
    write_edge_list,
)
from kapex.planarity import is_planar
from kapex.solver import brute_force_oracle


def test_edge_list_triangle():
    g = load_graph(b"1 2\n2 3\n1 3").graph
    assert g.vertices() == {1, 2, 3}
    assert g.edges() == [(1, 2), (1, 3), (2, 3)]


def test_empty_stream():
    res = load_graph(b"")
    assert res.graph.n == 0 and res.graph.m == 0


def test_duplicate_edges_counted():
    res = load_graph("1 2\n1 2\n2 1\n")
    assert res.graph.m == 1
    assert res.duplicate_edges == 2


def test_self_loop_dropped_and_counted():
    res = load_graph("3 3\n3 4\n")
    assert res.self_loops == 1 and res.graph.edges() == [(3, 4)]


def test_isolated_vertex_and_comments():
    g = load_graph("# header\n7\n1 2\n\n").graph
    assert g.vertices() == {1, 2, 7}


@pytest.mark.parametrize(
    "text, error",
    [
        ("1 x\n", ParseError),
        ("1 2 3\n", ParseError),
        ("-1 2\n", ParseError),
        (f"1 {MAX_VERTEX_ID + 1}\n", CapacityError),
    ],
)
def test_malformed_edge_lists(text, error):
    with pytest.raises(error):
        load_graph(text)


def test_parse_error_reports_line():
    with pytest.raises(ParseError) as info:
        load_graph("1 2\n2 oops\n")
    assert info.value.line == 2


def test_dimacs_roundtrip_and_errors():
    g = load_graph("c comment\np edge 4 2\ne 1 2\ne 3 4\n", "dimacs").graph
    assert g.vertices() == {1, 2, 3, 4} and g.m == 2
    with pytest.raises(ParseError):
        load_graph("e 1 2\n", "dimacs")
    with pytest.raises(CapacityError):
        load_graph("p edge 2 1\ne 1 3\n", "dimacs")
    with pytest.raises(ParseError):
        load_graph("p edge 2 1\ne 0 1\n", "dimacs")
    with pytest.raises(DomainError):
        load_graph("1 2", "xml")


def test_delete_vertices_examples():
    assert delete_vertices(k5(), {0}) == complete_graph(4, start=1)
    tri = Graph([1, 2, 3], [(1, 2), (2, 3), (1, 3)])
    assert tri.delete_vertices(set()) == tri
    assert tri.delete_vertices({2}) == Graph([1, 3], [(1, 3)])
    with pytest.raises(DomainError):
        tri.delete_vertices({9})


def test_components_examples():
    tri = Graph([1, 2, 3], [(1, 2), (2, 3), (1, 3)])
    assert connected_components(tri) == [frozenset({1, 2, 3})]
    assert connected_components(Graph()) == []
    assert connected_components(Graph([], [(5, 6), (1, 2)])) == [frozenset({1, 2}), frozenset({5, 6})]


def test_prefilter_examples():
    assert edge_count_prefilter(k5(), 1) == "pass"
    k20 = complete_graph(20)
    assert edge_count_prefilter(k20, 0) == "reject"
    assert not is_planar(k20)
    assert edge_count_prefilter(Graph(), 0) == "pass"


def test_self_loop_constructor_rejected():
    with pytest.raises(DomainError):
        Graph([1], [(1, 1)])


@given(graphs(max_vertices=10), st.data())
def test_delete_vertices_keeps_surviving_edges(g, data):
    s = set(data.draw(st.sets(st.sampled_from(sorted(g.vertices()))) if g.n else st.just(set())))
    h = g.delete_vertices(s)
    assert h.vertices() == g.vertices() - s
    assert set(h.edges()) == {(u, v) for u, v in g.edges() if u not in s and v not in s}


@given(graphs(max_vertices=12))
def test_edge_list_roundtrip(g):
    buf = io.StringIO()
    write_edge_list(g, buf)
    assert load_graph(buf.getvalue()).graph == g


@given(graphs(max_vertices=12))
def test_dimacs_roundtrip(g):
    shifted = Graph((v + 1 for v in g), ((u + 1, v + 1) for u, v in g.edges()))
    buf = io.StringIO()
    write_dimacs(shifted, buf)
    assert load_graph(buf.getvalue(), "dimacs").graph == shifted


@given(graphs(max_vertices=12))
def test_components_partition(g):
    comps = connected_components(g)
    assert sorted(v for c in comps for v in c) == g.sorted_vertices()
    assert [min(c) for c in comps] == sorted(min(c) for c in comps)
    for a, b in combinations(comps, 2):
        assert not any(g.has_edge(u, v) for u in a for v in b)


def test_prefilter_never_rejects_feasible(atlas7, graphs8):
    for g in atlas7 + graphs8:
        for k in range(3):
            if edge_count_prefilter(g, k) == "reject":
                assert not brute_force_oracle(g, k).feasible
