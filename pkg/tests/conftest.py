import pytest

from wlrad.graph_core import AttributedGraph, GraphSample, cycle_edges

ACCEPTANCE_LINES = []


def c6():
    return AttributedGraph(6, tuple(cycle_edges(6)))


def two_triangles():
    return AttributedGraph(6, tuple(cycle_edges(3) + cycle_edges(3, offset=3)))


def p3():
    return AttributedGraph(3, ((0, 1), (1, 2)))


def c3():
    return AttributedGraph(3, tuple(cycle_edges(3)))


def star3():
    return AttributedGraph(4, ((0, 1), (0, 2), (0, 3)))


@pytest.fixture
def wl_blind_pair():
    return GraphSample((c6(), two_triangles()))


@pytest.fixture
def path_vs_triangle():
    return GraphSample((p3(), c3()))


@pytest.fixture
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
