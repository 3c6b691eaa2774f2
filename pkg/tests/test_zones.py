from __future__ import annotations

import random
from functools import lru_cache
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kapex.constants import Constants
from kapex.generate import plant
from kapex.graph import DomainError, Graph, complete_graph
from kapex.hexgrid import build_hexgrid, hex_distance, subdivision_of_grid, validate_hex_subdivision
from kapex.zones import (
    ComponentIndex,
    classify_zone,
    component_type,
    grid_components,
    induced_with_components,
    is_flat,
    layout_zones,
    reduction_a,
    t_vertices,
    zone_centers,
    zone_diagnostics,
)


@lru_cache(maxsize=None)
def exact_host(q: int, seed: int = 0):
    """A lightly subdivided H_r that is exactly the zone union's host, k = 1."""
    c = Constants.reduced(1, q)
    grid = build_hexgrid(c.radius)
    rng = random.Random(seed)
    lengths = {e: 2 for e in grid.edges if rng.random() < 0.2}
    g, sub = subdivision_of_grid(grid, lengths)
    return g, layout_zones(sub, c)


def fresh(g: Graph) -> int:
    return max(g) + 1


def test_zone_centers_and_count():
    assert zone_centers(1, 1) == [(0, 0)]
    centers = zone_centers(2, 1)
    assert len(centers) == 7
    # neighbouring zones of radius 7 sit 13 cells apart
    assert sorted(hex_distance(c) for c in centers) == [0] + [13] * 6


def test_layout_rejects_wrong_radius():
    g, layout = exact_host(1)
    with pytest.raises(DomainError):
        layout_zones(layout.host, Constants.reduced(1, 2))


def test_exact_host_has_no_components():
    g, layout = exact_host(1)
    assert grid_components(g, layout) == []
    z = layout.zones[0]
    assert classify_zone(g, layout, z) == "closed"
    assert is_flat(g, layout, z)


def test_chord_is_single_edge_component():
    g, layout = exact_host(1)
    z = layout.zones[0]
    a, b = sorted(layout.ring_vertices(z, 0))[:1] + sorted(layout.ring_vertices(z, 2))[:1]
    comps = grid_components(g.with_edges([(a, b)]), layout)
    assert len(comps) == 1 and comps[0].kind == "single-edge" and comps[0].attachments == {a, b}


def test_pendant_path_component():
    g, layout = exact_host(1)
    v = min(layout.r_vertices)
    n = fresh(g)
    h = g.with_edges([(v, n), (n, n + 1), (n + 1, n + 2)])
    (comp,) = grid_components(h, layout)
    assert comp.kind == "component" and comp.vertices == {n, n + 1, n + 2} and comp.attachments == {v}


def test_missing_zone_vertex_is_an_error():
    g, layout = exact_host(1)
    with pytest.raises(DomainError):
        grid_components(g.delete_vertices([min(layout.r_vertices)]), layout)


def test_core_chord_to_other_zone_opens_zone():
    g, layout = exact_host(2)
    z0, z1 = layout.zones[0], layout.zones[1]
    core = min(z0.core_vertices)
    far = min(z1.vertices - z0.vertices)
    h = g.with_edges([(core, far)])
    assert classify_zone(h, layout, z0) == "open"
    assert not is_flat(h, layout, z0)


def test_component_inside_own_zone_keeps_it_closed():
    g, layout = exact_host(2)
    z0 = layout.zones[0]
    a, b = sorted(z0.core_vertices)[:2]
    n = fresh(g)
    h = g.with_edges([(a, n), (n, b)])
    assert classify_zone(h, layout, z0) == "closed"


def test_k5_on_one_cell_breaks_flatness():
    g, layout = exact_host(1)
    z = layout.zones[0]
    corners = layout.host.grid.corners((0, 0))
    anchor = layout.host.branch_map[corners[0]]
    n = fresh(g)
    k5 = complete_graph(5, start=n)
    h = g.with_edges(k5.edges() + [(anchor, n)])
    assert classify_zone(h, layout, z) == "closed"
    assert not is_flat(h, layout, z)


def test_t_of_h_rules():
    g, layout = exact_host(1)
    z = layout.zones[0]
    r0 = layout.ring_vertices(z, 0)
    r1_only = layout.ring_vertices(z, 1) - r0
    a, b = min(r0), min(r1_only)
    n = fresh(g)
    h = g.with_edges([(a, n), (b, n + 1), (n + 1, n + 2), (n + 2, b)])
    h = h.with_edges([(a, n + 3), (n + 3, b)])
    index = ComponentIndex.build(h, layout)
    # only the pendant at a is attached to R_0 alone; the bridge a..b is not
    assert t_vertices(layout, r0, index) == set(r0) | {n}
    assert induced_with_components(h, layout, layout.r_vertices, index).vertices() == h.vertices()
    plain = induced_with_components(g, layout, r0)
    assert plain == g.induced_subgraph(r0)


def test_detached_component_never_joins_t():
    g, layout = exact_host(1)
    n = fresh(g)
    h = g.with_edges(complete_graph(5, start=n).edges())
    index = ComponentIndex.build(h, layout)
    assert not (t_vertices(layout, layout.r_vertices, index) & set(range(n, n + 5)))
    assert is_flat(h, layout, layout.zones[0])


def test_reduction_a_on_bare_zone_deletes_center_cell():
    g, layout = exact_host(1)
    z = layout.zones[0]
    h = reduction_a(g, layout, z)
    center_cell = layout.host.host_vertices_of_cells([(0, 0)])
    assert g.vertices() - h.vertices() == center_cell


def test_reduction_a_refuses_nonflat_zone():
    g, layout = exact_host(2)
    z0, z1 = layout.zones[0], layout.zones[1]
    h = g.with_edges([(min(z0.core_vertices), min(z1.vertices - z0.vertices))])
    with pytest.raises(DomainError):
        reduction_a(h, layout, z0)


@pytest.mark.parametrize("q", [1, 2])
def test_rings_and_zone_geometry(q):
    g, layout = exact_host(q)
    zr = layout.constants.zone_radius
    for z in layout.zones:
        assert len(z.rings) == zr
        assert set().union(*map(set, z.rings)) == z.cells
        for i in range(zr - 2):
            assert not set(z.rings[i]) & set(z.rings[i + 2])
            assert not layout.ring_vertices(z, i) & layout.ring_vertices(z, i + 2)
        sub = layout.host.restrict(z.center, zr)
        assert not validate_hex_subdivision(g, sub, topological=False)
        # the outer circle is a subdivided cycle through 12 zr - 6 grid vertices
        assert len(z.outer_circle & set(layout.host.branch_map.values())) == 12 * zr - 6
        ring_graph = g.induced_subgraph(z.outer_circle)
        assert all(ring_graph.degree(v) == 2 for v in z.outer_circle)
        assert not z.outer_circle & z.core_vertices
    for a, b in combinations(layout.zones, 2):
        shared = a.vertices & b.vertices
        assert shared <= a.outer_circle and shared <= b.outer_circle


def test_zone_subdivision_is_topologically_a_grid():
    g, layout = exact_host(1)
    z = layout.zones[0]
    sub = layout.host.restrict(z.center, z.radius)
    assert not validate_hex_subdivision(g, sub, topological=True)


def test_neighbouring_zones_share_outer_paths():
    g, layout = exact_host(2)
    z0 = layout.zones[0]
    for other in layout.zones[1:]:
        assert z0.vertices & other.vertices


@settings(max_examples=15)
@given(st.integers(0, 10**6), st.sampled_from([0, 1]))
def test_components_partition_the_rest(seed, k):
    inst = plant(2460, k, seed, "reduced", "local")
    layout = layout_zones(inst.grid, Constants.reduced(1, 2))
    comps = [c for c in grid_components(inst.graph, layout) if c.kind == "component"]
    seen = set(layout.r_vertices)
    for c in comps:
        assert not c.vertices & seen
        seen |= c.vertices
    assert seen == inst.graph.vertices()


@settings(max_examples=10)
@given(st.integers(0, 10**6))
def test_core_components_of_flat_zones_are_edge_or_cell(seed):
    inst = plant(2460, 0, seed, "reduced")
    layout = layout_zones(inst.grid, Constants.reduced(1, 2))
    index = ComponentIndex.build(inst.graph, layout)
    for z in layout.zones:
        assert is_flat(inst.graph, layout, z, index)
        for i in sorted(index.attached_to(z.core_vertices)):
            assert component_type(layout, z, index.components[i]) in ("edge", "cell")


def test_diagnostics_shape():
    inst = plant(2460, 1, 4, "reduced", "local")
    layout = layout_zones(inst.grid, Constants.reduced(1, 2))
    diag = zone_diagnostics(inst.graph, layout)
    assert [d["id"] for d in diag] == list(range(7))
    assert all(d["status"] in ("open", "closed") for d in diag)
    assert any(d["flat"] for d in diag)
    assert all(set(d["components"]) == {"single-edge", "component"} for d in diag)
