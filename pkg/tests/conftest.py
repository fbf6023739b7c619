import random

import pytest
from hypothesis import strategies as st

from bpmatch.graph import OddCycle, OddCycleSet, WeightedGraph


def triangle() -> WeightedGraph:
    return WeightedGraph.from_edges(3, [(0, 1, 2), (1, 2, 1), (0, 2, 1)])


def ring(k: int, weights=None) -> WeightedGraph:
    weights = weights or [1] * k
    return WeightedGraph.from_edges(k, [(i, (i + 1) % k, weights[i]) for i in range(k)])


def random_graph(rng: random.Random, n: int, density: float, w_max: int) -> WeightedGraph:
    edges = [(u, v, rng.randint(1, w_max))
             for u in range(n) for v in range(u + 1, n) if rng.random() < density]
    return WeightedGraph.from_edges(n, edges)


def random_cycle_set(graph: WeightedGraph, rng: random.Random, attempts: int = 40) -> OddCycleSet:
    """Edge-disjoint odd cycles found by sampling vertex sequences."""
    cycles = OddCycleSet()
    n = graph.vertex_count
    for _ in range(attempts):
        k = rng.choice([3, 3, 3, 5, 5, 7])
        if k > n:
            continue
        verts = rng.sample(range(n), k)
        ids = [graph.edge_id(verts[i], verts[(i + 1) % k]) for i in range(k)]
        if None in ids or set(ids) & cycles.used_edges():
            continue
        cycles = cycles.add(OddCycle.from_vertices(graph, verts))
    return cycles


def all_matchings(graph: WeightedGraph):
    """Every matching as a 0/1 tuple over edge ids."""
    m = graph.edge_count
    used = [False] * graph.vertex_count
    x = [0] * m

    def rec(e):
        if e == m:
            yield tuple(x)
            return
        yield from rec(e + 1)
        u, v, _ = graph.edges[e]
        if not used[u] and not used[v]:
            used[u] = used[v] = True
            x[e] = 1
            yield from rec(e + 1)
            x[e] = 0
            used[u] = used[v] = False

    yield from rec(0)


@st.composite
def graphs_with_cycles(draw, max_n: int = 8, w_max: int = 20):
    n = draw(st.integers(1, max_n))
    density = draw(st.sampled_from([0.3, 0.6, 0.9]))
    seed = draw(st.integers(0, 2**32 - 1))
    rng = random.Random(seed)
    g = random_graph(rng, n, density, w_max)
    return g, random_cycle_set(g, rng)


@pytest.fixture
def tri():
    return triangle()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
