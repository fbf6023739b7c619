"""Weighted graphs, odd cycles, instance I/O and random instance generation."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

HALF = Fraction(1, 2)


class GraphFormatError(ValueError):
    """Raised for malformed instance text; carries the 1-based line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class WeightedGraph:
    """Undirected graph with integer edge weights.

    Edge ids are the positions in ``edges``; ``incident[i]`` lists the edge ids
    touching vertex ``i`` in ascending order.
    """

    vertex_count: int
    edges: tuple[tuple[int, int, int], ...]
    incident: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        n = self.vertex_count
        if n < 0:
            raise ValueError("vertex_count must be >= 0")
        incident: list[list[int]] = [[] for _ in range(n)]
        index = {}
        for eid, (u, v, w) in enumerate(self.edges):
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge {eid} has an endpoint outside 0..{n - 1}")
            if u == v:
                raise ValueError(f"edge {eid} is a self-loop at vertex {u}")
            if not isinstance(w, (int, np.integer)) or isinstance(w, bool):
                raise ValueError(f"edge {eid} weight {w!r} is not an integer")
            key = (min(u, v), max(u, v))
            if key in index:
                raise ValueError(f"edge {eid} duplicates edge {index[key]}")
            index[key] = eid
            incident[u].append(eid)
            incident[v].append(eid)
        object.__setattr__(self, "incident", tuple(tuple(x) for x in incident))
        object.__setattr__(self, "_index", index)

    @classmethod
    def from_edges(cls, vertex_count: int, edges: Iterable[Sequence[int]]) -> "WeightedGraph":
        return cls(vertex_count, tuple((int(u), int(v), int(w)) for u, v, w in edges))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def edge_id(self, u: int, v: int) -> int | None:
        return self._index.get((min(u, v), max(u, v)))

    def weight(self, eid: int) -> int:
        return self.edges[eid][2]

    def other(self, eid: int, vertex: int) -> int:
        u, v, _ = self.edges[eid]
        return v if u == vertex else u

    def to_text(self) -> str:
        lines = [f"{self.vertex_count} {self.edge_count}"]
        lines += [f"{u} {v} {w}" for u, v, w in self.edges]
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class OddCycle:
    """Cyclically ordered vertices ``(j_0, ..., j_{k-1})`` with ``edge_ids[a]``
    joining ``j_a`` and ``j_{a+1 mod k}``."""

    vertices: tuple[int, ...]
    edge_ids: tuple[int, ...]

    def __len__(self):
        return len(self.vertices)

    @classmethod
    def from_vertices(cls, graph: WeightedGraph, vertices: Sequence[int]) -> "OddCycle":
        k = len(vertices)
        if k < 3 or k % 2 == 0:
            raise ValueError(f"cycle length {k} is not odd and >= 3")
        if len(set(vertices)) != k:
            raise ValueError("cycle repeats a vertex")
        eids = []
        for a in range(k):
            eid = graph.edge_id(vertices[a], vertices[(a + 1) % k])
            if eid is None:
                raise ValueError(f"cycle uses missing edge ({vertices[a]}, {vertices[(a + 1) % k]})")
            eids.append(eid)
        return cls(tuple(int(v) for v in vertices), tuple(eids))


@dataclass(frozen=True)
class OddCycleSet:
    cycles: tuple[OddCycle, ...] = ()

    def __post_init__(self):
        seen: dict[int, int] = {}
        for c, cyc in enumerate(self.cycles):
            for eid in cyc.edge_ids:
                if eid in seen:
                    raise ValueError(f"cycles {seen[eid]} and {c} share edge {eid}")
                seen[eid] = c

    def __len__(self):
        return len(self.cycles)

    def __iter__(self):
        return iter(self.cycles)

    def used_edges(self) -> frozenset[int]:
        return frozenset(e for c in self.cycles for e in c.edge_ids)

    def add(self, cycle: OddCycle) -> "OddCycleSet":
        return OddCycleSet(self.cycles + (cycle,))

    def to_text(self) -> str:
        return "".join(" ".join(map(str, c.vertices)) + "\n" for c in self.cycles)


def validate_cycles(graph: WeightedGraph, cycles: OddCycleSet) -> None:
    """Check every cycle against the host graph; raises ValueError."""
    for c, cyc in enumerate(cycles):
        k = len(cyc.vertices)
        if k < 3 or k % 2 == 0 or len(cyc.edge_ids) != k or len(set(cyc.vertices)) != k:
            raise ValueError(f"cycle {c} is not a simple odd cycle")
        for a, eid in enumerate(cyc.edge_ids):
            if not 0 <= eid < graph.edge_count:
                raise ValueError(f"cycle {c} references unknown edge {eid}")
            u, v, _ = graph.edges[eid]
            if {u, v} != {cyc.vertices[a], cyc.vertices[(a + 1) % k]}:
                raise ValueError(f"cycle {c} edge {eid} does not join consecutive vertices")


def parse_graph(text: str) -> WeightedGraph:
    """Parse the plain-text edge-list format.

    The first non-blank line is ``<vertex_count> <edge_count>``; each following
    line is ``<u> <v> <w>``. Blank lines and ``#`` comments are ignored.
    """
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            rows.append((lineno, line.split()))
    if not rows:
        raise GraphFormatError(1, "empty instance")
    lineno, head = rows[0]
    if len(head) != 2:
        raise GraphFormatError(lineno, "header must be '<vertex_count> <edge_count>'")
    n, m = (_parse_int(tok, lineno) for tok in head)
    if n < 0 or m < 0:
        raise GraphFormatError(lineno, "negative count in header")
    if len(rows) - 1 != m:
        bad = rows[-1][0] if len(rows) - 1 > m else lineno
        raise GraphFormatError(bad, f"header declares {m} edges, found {len(rows) - 1}")
    edges = []
    seen: dict[tuple[int, int], int] = {}
    for lineno, toks in rows[1:]:
        if len(toks) != 3:
            raise GraphFormatError(lineno, "edge line must be '<u> <v> <w>'")
        u, v = _parse_int(toks[0], lineno), _parse_int(toks[1], lineno)
        w = _parse_int(toks[2], lineno, what="weight")
        if not (0 <= u < n and 0 <= v < n):
            raise GraphFormatError(lineno, f"vertex id out of range 0..{n - 1}")
        if u == v:
            raise GraphFormatError(lineno, f"self-loop at vertex {u}")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise GraphFormatError(lineno, f"duplicate edge ({u}, {v}), first on line {seen[key]}")
        seen[key] = lineno
        edges.append((u, v, w))
    return WeightedGraph(n, tuple(edges))


def _parse_int(tok: str, lineno: int, what: str = "value") -> int:
    try:
        return int(tok)
    except ValueError:
        raise GraphFormatError(lineno, f"{what} {tok!r} is not an integer") from None


def parse_cycles(graph: WeightedGraph, text: str) -> OddCycleSet:
    """Parse a cycle sidecar: one cycle per line, vertex ids in cyclic order."""
    cycles = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            verts = [int(t) for t in line.split()]
            cycles.append(OddCycle.from_vertices(graph, verts))
        except ValueError as exc:
            raise GraphFormatError(lineno, str(exc)) from None
    return OddCycleSet(tuple(cycles))


def generate_instance(n: int, p: float, w_max: int, seed: int) -> WeightedGraph:
    """Complete graph on ``n`` vertices with each edge deleted independently
    with probability ``p``; survivors get integer weights uniform in [1, w_max]."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    if w_max < 1:
        raise ValueError("w_max must be >= 1")
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(n, k=1)
    keep = rng.random(iu.size) >= p
    iu, ju = iu[keep], ju[keep]
    weights = rng.integers(1, w_max, size=iu.size, endpoint=True)
    return WeightedGraph(n, tuple(zip(iu.tolist(), ju.tolist(), weights.tolist())))


def find_odd_cycle(
    graph: WeightedGraph,
    allowed_edges: Iterable[int] | None = None,
    forbidden_edges: Iterable[int] = (),
) -> OddCycle | None:
    """Return an odd cycle of the subgraph on ``allowed_edges - forbidden_edges``.

    BFS 2-colouring, roots in ascending vertex order and neighbours in
    ascending edge-id order. The first edge joining two vertices of the same
    colour closes an odd cycle through the BFS tree; it is simple because both
    endpoints sit at the same depth.
    """
    usable = set(range(graph.edge_count)) if allowed_edges is None else set(allowed_edges)
    usable -= set(forbidden_edges)
    if not usable:
        return None
    n = graph.vertex_count
    depth = [-1] * n
    parent_edge = [-1] * n
    for root in range(n):
        if depth[root] >= 0:
            continue
        depth[root] = 0
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for eid in graph.incident[u]:
                if eid not in usable or eid == parent_edge[u]:
                    continue
                v = graph.other(eid, u)
                if depth[v] < 0:
                    depth[v] = depth[u] + 1
                    parent_edge[v] = eid
                    queue.append(v)
                elif depth[v] == depth[u]:
                    return _close_cycle(graph, u, v, eid, parent_edge)
    return None


def _close_cycle(graph, u, v, eid, parent_edge) -> OddCycle:
    # walk both endpoints up to their lowest common ancestor
    left, right = [u], [v]
    left_e, right_e = [], []
    a, b = u, v
    while a != b:
        ea, eb = parent_edge[a], parent_edge[b]
        a, b = graph.other(ea, a), graph.other(eb, b)
        left.append(a)
        right.append(b)
        left_e.append(ea)
        right_e.append(eb)
    # left = u .. lca, right = v .. lca; cycle lca -> .. -> u -> v -> .. -> lca
    verts = left[::-1] + right[:-1]
    edges = left_e[::-1] + [eid] + right_e
    return OddCycle(tuple(verts), tuple(edges))


@dataclass(frozen=True)
class MatchingCheck:
    ok: bool
    total_weight: int
    shared_vertex: int | None = None


def validate_matching(graph: WeightedGraph, matching: Iterable[int]) -> MatchingCheck:
    used: set[int] = set()
    total = 0
    shared = None
    for eid in sorted(set(matching)):
        u, v, w = graph.edges[eid]
        total += w
        for x in (u, v):
            if x in used and shared is None:
                shared = x
            used.add(x)
    return MatchingCheck(shared is None, total, shared)


def is_bipartite(graph: WeightedGraph, edge_ids: Iterable[int] | None = None) -> bool:
    """Plain 2-colouring check, kept separate from ``find_odd_cycle``."""
    eids = range(graph.edge_count) if edge_ids is None else edge_ids
    adj: dict[int, list[int]] = {}
    for eid in eids:
        u, v, _ = graph.edges[eid]
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    colour: dict[int, int] = {}
    for s in adj:
        if s in colour:
            continue
        colour[s] = 0
        stack = [s]
        while stack:
            u = stack.pop()
            for v in adj[u]:
                if v not in colour:
                    colour[v] = 1 - colour[u]
                    stack.append(v)
                elif colour[v] == colour[u]:
                    return False
    return True
