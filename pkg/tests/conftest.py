from __future__ import annotations

import sys
from pathlib import Path

import networkx as nx
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from kapex.graph import Graph

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

DATA = Path(__file__).parent / "data"

# criterion number -> (title, outcome); filled by the acceptance tests
CRITERIA: dict[int, list] = {}


def pytest_configure(config: pytest.Config) -> None:
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion n")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item: pytest.Item, call: pytest.CallInfo):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when not in ("setup", "call"):
        return
    n, title = marker.args
    entry = CRITERIA.setdefault(n, [title, "PASS", ""])
    if report.failed:
        entry[1] = "FAIL"
        entry[2] = str(report.longrepr).strip().splitlines()[-1][:160]
    elif report.skipped and report.when == "setup":
        entry[1] = "SKIP"


def pytest_terminal_summary(terminalreporter) -> None:
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        title, status, detail = CRITERIA[n]
        line = f"criterion {n} ({title}): {status}"
        terminalreporter.write_line(line + (f"  [{detail}]" if detail else ""))


# -- graph helpers and strategies ------------------------------------------------------


def from_nx(h: nx.Graph) -> Graph:
    return Graph(h.nodes, h.edges)


def k5() -> Graph:
    return from_nx(nx.complete_graph(5))


def k33() -> Graph:
    return from_nx(nx.complete_bipartite_graph(3, 3))


@st.composite
def graphs(draw, max_vertices: int = 9, min_vertices: int = 0) -> Graph:
    n = draw(st.integers(min_vertices, max_vertices))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    density = draw(st.floats(0.0, 1.0))
    coins = draw(st.lists(st.floats(0.0, 1.0), min_size=len(pairs), max_size=len(pairs)))
    return Graph(range(n), [e for e, c in zip(pairs, coins) if c < density])


@pytest.fixture(scope="session")
def graphs8() -> list[Graph]:
    lines = (DATA / "graphs8.g6").read_text().split()
    return [from_nx(nx.from_graph6_bytes(line.encode())) for line in lines]


@pytest.fixture(scope="session")
def atlas7() -> list[Graph]:
    return [from_nx(h) for h in nx.graph_atlas_g()]
