"""Zones inside a hex-grid subdivision, grid-components and Reduction A.

Zones are H_{2k+5} balls centred on a super-lattice whose cells tile the
plane exactly (the lattice determinant equals the ball size), so adjacent
zones share outer-circle edge-paths and nothing else.  The super-lattice
vectors are ``U = (2s+1, -s)`` and ``V = (s, s+1)`` with ``s = 2k+4``; one
zone sits on every cell of H_q.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Iterable
from dataclasses import dataclass, field
from functools import cached_property

from .constants import Constants, radius_for
from .graph import DomainError, Edge, Graph
from .hexgrid import Cell, HexSubdivision, circle_index, hex_distance, ring, spiral
from .planarity import is_planar

__all__ = [
    "GridComponent",
    "Zone",
    "ZoneLayout",
    "ComponentIndex",
    "layout_zones",
    "radius_for",
    "zone_centers",
    "grid_components",
    "index_components",
    "classify_zone",
    "induced_with_components",
    "t_vertices",
    "is_flat",
    "reduction_a",
    "component_type",
    "zone_diagnostics",
]

OPEN = "open"
CLOSED = "closed"


@dataclass(frozen=True)
class GridComponent:
    """A chord of R (``kind == "single-edge"``) or a component of G - R."""

    kind: str
    vertices: frozenset[int]
    attachments: frozenset[int]
    edge: Edge | None = None


@dataclass(frozen=True, eq=False)
class Zone:
    id: int
    center: Cell
    radius: int  # zone is H_radius; its core is H_{radius - 2}
    cells: frozenset[Cell]
    rings: tuple[tuple[Cell, ...], ...]
    vertices: frozenset[int]
    core_vertices: frozenset[int]
    outer_circle: frozenset[int]

    @property
    def core_cells(self) -> frozenset[Cell]:
        return frozenset(c for c in self.cells if hex_distance(c, self.center) <= self.radius - 3)


@dataclass(frozen=True, eq=False)
class ZoneLayout:
    host: HexSubdivision
    constants: Constants
    zones: tuple[Zone, ...]
    r_vertices: frozenset[int]
    r_edges: frozenset[Edge]

    @property
    def k(self) -> int:
        return self.constants.k

    @property
    def q(self) -> int:
        return self.constants.q

    @cached_property
    def zones_of_vertex(self) -> dict[int, tuple[int, ...]]:
        out: dict[int, list[int]] = {}
        for z in self.zones:
            for v in z.vertices:
                out.setdefault(v, []).append(z.id)
        return {v: tuple(ids) for v, ids in out.items()}

    def ring_vertices(self, zone: Zone, i: int) -> frozenset[int]:
        return frozenset(self.host.host_vertices_of_cells(zone.rings[i]))

    def ring_edges(self, zone: Zone, i: int) -> frozenset[Edge]:
        return frozenset(self.host.host_edges_of_cells(zone.rings[i]))


def zone_centers(q: int, k: int) -> list[Cell]:
    """Host-grid cells at the centres of the ``3q(q-1)+1`` zones, in spiral order of H_q."""
    s = 2 * k + 4
    u, v = (2 * s + 1, -s), (s, s + 1)
    return [(a * u[0] + b * v[0], a * u[1] + b * v[1]) for a, b in spiral((0, 0), q - 1)]


def layout_zones(host: HexSubdivision, k: int | Constants) -> ZoneLayout:
    """Lay out the zones of ``host``; an integer ``k`` selects the full constants."""
    constants = Constants.paper(k) if isinstance(k, int) else k
    if host.radius != constants.radius:
        raise DomainError(f"host radius {host.radius} does not match required radius {constants.radius}")
    grid = host.grid
    zr = constants.zone_radius
    zones = []
    r_vertices: set[int] = set()
    r_edges: set[Edge] = set()
    for zid, center in enumerate(zone_centers(constants.q, constants.k)):
        cells = spiral(center, zr - 1)
        if not grid.cell_set.issuperset(cells):
            raise AssertionError(f"zone at {center} leaves the host grid")
        rings = tuple(tuple(ring(center, i)) for i in range(zr))
        core = [c for c in cells if hex_distance(c, center) <= zr - 3]
        outer_edges = [
            e for e in grid.edges_of_cells(rings[-1])
            if all(circle_index(grid.keys[x], center) == zr for x in e)
        ]
        outer = set()
        for e in outer_edges:
            outer.update(host.path_map[e])
        vs = host.host_vertices_of_cells(cells)
        zones.append(Zone(
            zid, center, zr, frozenset(cells), rings, frozenset(vs),
            frozenset(host.host_vertices_of_cells(core)), frozenset(outer),
        ))
        r_vertices |= vs
        r_edges |= host.host_edges_of_cells(cells)
    return ZoneLayout(host, constants, tuple(zones), frozenset(r_vertices), frozenset(r_edges))


# -- grid-components ---------------------------------------------------------------


def grid_components(g: Graph, layout: ZoneLayout) -> list[GridComponent]:
    """Chords of R first (sorted), then components of G - R by smallest vertex."""
    r = layout.r_vertices
    missing = [v for v in r if v not in g]
    if missing:
        raise DomainError(f"zone vertex {min(missing)} is not in the graph")
    out = []
    for a, b in g.edges():
        if a in r and b in r and (a, b) not in layout.r_edges:
            out.append(GridComponent("single-edge", frozenset(), frozenset((a, b)), (a, b)))
    seen: set[int] = set()
    comps = []
    for s in g.sorted_vertices():
        if s in r or s in seen:
            continue
        seen.add(s)
        members = [s]
        attach = set()
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in g.neighbors(u):
                if w in r:
                    attach.add(w)
                elif w not in seen:
                    seen.add(w)
                    members.append(w)
                    queue.append(w)
        comps.append(GridComponent("component", frozenset(members), frozenset(attach)))
    return out + comps


@dataclass
class ComponentIndex:
    """Grid-components of one graph plus an attachment lookup by R vertex."""

    components: list[GridComponent]
    by_vertex: dict[int, list[int]] = field(default_factory=dict)

    @classmethod
    def build(cls, g: Graph, layout: ZoneLayout) -> ComponentIndex:
        comps = grid_components(g, layout)
        idx = cls(comps)
        for i, c in enumerate(comps):
            for v in c.attachments:
                idx.by_vertex.setdefault(v, []).append(i)
        return idx

    def attached_to(self, vertices: Iterable[int]) -> set[int]:
        out: set[int] = set()
        for v in vertices:
            out.update(self.by_vertex.get(v, ()))
        return out


def index_components(g: Graph, layout: ZoneLayout) -> ComponentIndex:
    return ComponentIndex.build(g, layout)


def _index(g: Graph, layout: ZoneLayout, index: ComponentIndex | None) -> ComponentIndex:
    return index if index is not None else ComponentIndex.build(g, layout)


def classify_zone(g: Graph, layout: ZoneLayout, zone: Zone, index: ComponentIndex | None = None) -> str:
    """``open`` when a grid-component joins a core vertex to a vertex of R outside the zone."""
    index = _index(g, layout, index)
    for i in sorted(index.attached_to(zone.core_vertices)):
        if not index.components[i].attachments <= zone.vertices:
            return OPEN
    return CLOSED


def t_vertices(layout: ZoneLayout, h_vertices: Iterable[int], index: ComponentIndex) -> set[int]:
    """Vertex set of T(h): h plus every component attached to h and nowhere else.

    Components with no attachment at all are never included.
    """
    hv = set(h_vertices)
    out = set(hv)
    for i in index.attached_to(hv):
        c = index.components[i]
        if c.attachments <= hv:
            out |= c.vertices
    return out


def induced_with_components(
    g: Graph, layout: ZoneLayout, h_vertices: Iterable[int], index: ComponentIndex | None = None
) -> Graph:
    """T(h) for the subgraph of R spanned by ``h_vertices``."""
    hv = set(h_vertices)
    if not hv <= layout.r_vertices:
        raise DomainError("h must be a subgraph of the zone union")
    return g.induced_subgraph(t_vertices(layout, hv, _index(g, layout, index)))


def is_flat(g: Graph, layout: ZoneLayout, zone: Zone, index: ComponentIndex | None = None) -> bool:
    index = _index(g, layout, index)
    if classify_zone(g, layout, zone, index) == OPEN:
        return False
    return is_planar(g.induced_subgraph(t_vertices(layout, zone.vertices, index)))


def reduction_a(g: Graph, layout: ZoneLayout, zone: Zone, index: ComponentIndex | None = None) -> Graph:
    """Delete T(R_0) of a flat zone."""
    index = _index(g, layout, index)
    if not is_flat(g, layout, zone, index):
        raise DomainError(f"zone {zone.id} is not flat")
    return g.delete_vertices(t_vertices(layout, layout.ring_vertices(zone, 0), index))


def component_type(layout: ZoneLayout, zone: Zone, comp: GridComponent) -> str:
    """``edge`` (one edge-path or one vertex of the zone), ``cell`` (one cell) or ``other``."""
    att = comp.attachments
    if not att <= zone.vertices:
        return "other"
    host, grid = layout.host, layout.host.grid
    if len(att) == 1:
        return "edge"
    cells = sorted(zone.cells)
    for c in cells:
        for e in grid.cell_edges(c):
            if att <= set(host.path_map[e]):
                return "edge"
    for c in cells:
        if att <= host.host_vertices_of_cells([c]):
            return "cell"
    return "other"


def zone_diagnostics(g: Graph, layout: ZoneLayout, index: ComponentIndex | None = None) -> list[dict]:
    index = _index(g, layout, index)
    out = []
    for z in layout.zones:
        status = classify_zone(g, layout, z, index)
        core = index.attached_to(z.core_vertices)
        kinds = {"single-edge": 0, "component": 0}
        core_types = {"edge": 0, "cell": 0, "other": 0}
        for i in sorted(index.attached_to(z.vertices)):
            c = index.components[i]
            kinds[c.kind] += 1
            if i in core:
                core_types[component_type(layout, z, c)] += 1
        out.append({
            "id": z.id,
            "center": list(z.center),
            "status": status,
            "flat": status == CLOSED and is_flat(g, layout, z, index),
            "components": kinds,
            "core_components": core_types,
        })
    return out
