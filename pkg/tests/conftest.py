import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from racgdiv import DefiningGraph, cycle_graph, gamma_d  # noqa: E402
from racgdiv.graph import complete_bipartite  # noqa: E402


def c6_chord() -> DefiningGraph:
    c6 = cycle_graph(6)
    return DefiningGraph.from_edges(c6.vertices, [tuple(e) for e in c6.edges] + [("1", "4")])


@pytest.fixture
def c5():
    return cycle_graph(5)


@pytest.fixture
def k23():
    return complete_bipartite(2, 3)


@pytest.fixture
def chord():
    return c6_chord()


@pytest.fixture
def g1():
    return gamma_d(1)


@pytest.fixture
def g2():
    return gamma_d(2)


GATE: list[str] = []


@pytest.fixture
def gate():
    """Record one PASS/FAIL/SKIP line per acceptance criterion."""

    def record(n: int, status: str, detail: str) -> None:
        line = f"criterion {n}: {status} - {detail}"
        GATE.append(line)
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if GATE:
        terminalreporter.section("acceptance")
        for line in sorted(GATE, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
