"""Brute-force ground truth for small instances. Test and harness use only."""

from __future__ import annotations

from dataclasses import dataclass

from .graph import WeightedGraph
from .transform import TransformedModel, cycle_factor_accepts

MAX_MWM_EDGES = 30
MAX_MAP_EDGES = 25


class OracleTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class OracleResult:
    best: tuple[int, ...]          # 0/1 per variable
    objective: int
    is_unique: bool
    runner_up: int | None

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(i for i, v in enumerate(self.best) if v)


class _Best:
    def __init__(self):
        self.value = None
        self.config = None
        self.second = None

    def offer(self, value, config):
        if self.value is None or value > self.value:
            self.second = self.value
            self.value, self.config = value, tuple(config)
        elif self.second is None or value > self.second:
            self.second = value

    def result(self) -> OracleResult:
        unique = self.second is None or self.value > self.second
        return OracleResult(self.config, self.value, unique, self.second)


def brute_force_mwm(graph: WeightedGraph) -> OracleResult:
    """Enumerate every matching (edge branching with vertex-use pruning)."""
    m = graph.edge_count
    if m > MAX_MWM_EDGES:
        raise OracleTooLarge(f"{m} edges exceeds the enumeration guard of {MAX_MWM_EDGES}")
    used = [False] * graph.vertex_count
    x = [0] * m
    best = _Best()

    def rec(e, total):
        if e == m:
            best.offer(total, x)
            return
        rec(e + 1, total)
        u, v, w = graph.edges[e]
        if not used[u] and not used[v]:
            used[u] = used[v] = True
            x[e] = 1
            rec(e + 1, total + w)
            x[e] = 0
            used[u] = used[v] = False

    rec(0, 0)
    return best.result()


def brute_force_map_transformed(model: TransformedModel) -> OracleResult:
    """Maximise sum w'y over 0/1 vectors accepted by every vertex and cycle
    factor. Vertex constraints prune the enumeration; cycle factors are
    checked once all of their spokes are fixed."""
    m = model.edge_count
    if m > MAX_MAP_EDGES:
        raise OracleTooLarge(f"{m} transformed edges exceeds the guard of {MAX_MAP_EDGES}")
    n = model.base.vertex_count
    used = [False] * n
    y = [0] * m
    # cycle c can be checked once its last spoke (highest id) is set
    check_at: dict[int, list[int]] = {}
    for c, ids in enumerate(model.spoke_ids):
        check_at.setdefault(max(ids), []).append(c)
    best = _Best()

    def rec(e, total):
        if e == m:
            best.offer(total, y)
            return
        a, b, w = model.edges[e]
        ends = [v for v in (a, b) if v < n]
        for val in (0, 1):
            if val and any(used[v] for v in ends):
                continue
            y[e] = val
            for v in ends:
                used[v] = used[v] or bool(val)
            if all(cycle_factor_accepts([y[i] for i in model.spoke_ids[c]], model.distance[c])
                   for c in check_at.get(e, ())):
                rec(e + 1, total + val * w)
            if val:
                for v in ends:
                    used[v] = False
            y[e] = 0

    rec(0, 0)
    return best.result()


def reference_optimum(graph: WeightedGraph) -> int:
    """Maximum matching weight: enumeration when small, networkx's blossom
    implementation otherwise."""
    if graph.edge_count <= MAX_MWM_EDGES:
        return brute_force_mwm(graph).objective
    import networkx as nx

    g = nx.Graph()
    g.add_weighted_edges_from(graph.edges)
    mate = nx.max_weight_matching(g)
    return sum(g[u][v]["weight"] for u, v in mate)
