from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kapex.generate import base_radius, generate_planted_instance, plant
from kapex.graph import DomainError
from kapex.hexgrid import validate_hex_subdivision
from kapex.solver import verify_solution
from oracles import nx_planar


def test_same_seed_same_instance():
    a = plant(800, 1, 5)
    b = plant(800, 1, 5)
    assert a.graph == b.graph and a.apices == b.apices
    assert plant(800, 1, 6).graph != a.graph


@settings(max_examples=20)
@given(st.integers(300, 3000), st.integers(0, 2), st.integers(0, 10**6), st.sampled_from(["lattice", "local"]))
def test_planted_set_is_a_solution(n, k, seed, wiring):
    if k == 2 and n < 6 * 9 * 9 + 2:
        return
    inst = plant(n, k, seed, "reduced", wiring)
    g = inst.graph
    assert g.n == n and len(inst.apices) == k
    assert nx_planar(g.delete_vertices(inst.apices))
    assert verify_solution(g, inst.apices, k)
    assert not validate_hex_subdivision(g, inst.grid)
    assert not inst.apices & inst.grid.host_vertices()


def test_planar_when_no_apex():
    g, apices = generate_planted_instance(1000, 0, 3)
    assert not apices and nx_planar(g)


def test_apex_is_needed():
    for wiring in ("lattice", "local"):
        inst = plant(1200, 1, 2, wiring=wiring)
        assert not nx_planar(inst.graph)


def test_radius_choice():
    assert base_radius(2460, 1, "reduced") == (20, None)
    r, q = base_radius(12000, 2, "reduced")
    assert q is not None and 6 * r * r <= 12000 and r == (q - 1) * 17 + 9


@pytest.mark.parametrize(
    "args",
    [(5, 1, 0), (500, -1, 0), (100, 2, 0, "paper"), (800, 1, 0, "reduced", "spiral"), (800, 1, 0, "bogus")],
)
def test_bad_requests(args):
    with pytest.raises(DomainError):
        plant(*args)
