"""Cycle-contracting graph transformation and the x <-> y assignment maps.

Every odd cycle C is replaced by a hub vertex with one spoke per cycle
vertex. All transformed weights are kept at twice the natural scale so the
alternating spoke sums stay integral.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .graph import HALF, OddCycleSet, WeightedGraph, validate_cycles

_ALLOWED = (Fraction(0), HALF, Fraction(1))


@dataclass(frozen=True)
class Kept:
    edge: int


@dataclass(frozen=True)
class Spoke:
    cycle: int
    position: int
    vertex: int


def cycle_distance(k: int, a: int, b: int) -> int:
    """Distance on a k-cycle from vertex position ``a`` to edge ``(b, b+1)``."""
    def cd(x, y):
        d = abs(x - y) % k
        return min(d, k - d)
    return min(cd(a, b), cd(a, (b + 1) % k))


@dataclass(frozen=True)
class TransformedModel:
    base: WeightedGraph
    cycles: OddCycleSet
    vertex_count: int
    edges: tuple[tuple[int, int, int], ...]       # (a, b, doubled weight)
    provenance: tuple[Kept | Spoke, ...]
    distance: tuple[tuple[tuple[int, ...], ...], ...]  # per cycle: [vertex pos][edge pos]
    spoke_ids: tuple[tuple[int, ...], ...]            # per cycle: edge' id per position
    kept_ids: dict                                    # original edge id -> edge' id

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def hub(self, c: int) -> int:
        return self.base.vertex_count + c

    def to_text(self) -> str:
        lines = [f"{self.vertex_count} {self.edge_count}"]
        lines += [f"{a} {b} {w}" for a, b, w in self.edges]
        return "\n".join(lines) + "\n"

    def provenance_text(self) -> str:
        out = []
        for idx, prov in enumerate(self.provenance):
            if isinstance(prov, Kept):
                out.append(f"{idx} kept {prov.edge}")
            else:
                signs = " ".join("+" if d % 2 == 0 else "-"
                                 for d in self.distance[prov.cycle][prov.position])
                out.append(f"{idx} spoke {prov.cycle} {prov.vertex} {signs}")
        return "\n".join(out) + "\n"


def build_transform(graph: WeightedGraph, cycles: OddCycleSet = OddCycleSet()) -> TransformedModel:
    validate_cycles(graph, cycles)
    in_cycle = cycles.used_edges()
    edges, prov = [], []
    kept_ids = {}
    for eid, (u, v, w) in enumerate(graph.edges):
        if eid in in_cycle:
            continue
        kept_ids[eid] = len(edges)
        edges.append((u, v, 2 * w))
        prov.append(Kept(eid))
    distance, spoke_ids = [], []
    for c, cyc in enumerate(cycles):
        k = len(cyc.vertices)
        table = tuple(tuple(cycle_distance(k, a, b) for b in range(k)) for a in range(k))
        distance.append(table)
        cyc_w = [graph.weight(e) for e in cyc.edge_ids]
        ids = []
        hub = graph.vertex_count + c
        for a, j in enumerate(cyc.vertices):
            w2 = sum(w if table[a][b] % 2 == 0 else -w for b, w in enumerate(cyc_w))
            ids.append(len(edges))
            edges.append((hub, j, w2))
            prov.append(Spoke(c, a, j))
        spoke_ids.append(tuple(ids))
    return TransformedModel(
        base=graph,
        cycles=cycles,
        vertex_count=graph.vertex_count + len(cycles),
        edges=tuple(edges),
        provenance=tuple(prov),
        distance=tuple(distance),
        spoke_ids=tuple(spoke_ids),
        kept_ids=kept_ids,
    )


def lift_x_to_y(model: TransformedModel, x: Sequence) -> tuple[Fraction, ...]:
    """Map a 0/1 edge assignment on G to the transformed variables."""
    if len(x) != model.base.edge_count:
        raise ValueError("x has the wrong length")
    if any(v not in (0, 1) for v in x):
        raise ValueError("lift is only defined for 0/1 assignments")
    y: list[Fraction] = [Fraction(0)] * model.edge_count
    for eid, idx in model.kept_ids.items():
        y[idx] = Fraction(x[eid])
    for c, cyc in enumerate(model.cycles):
        k = len(cyc.vertices)
        for a in range(k):
            val = x[cyc.edge_ids[a - 1]] + x[cyc.edge_ids[a]]
            if val > 1:
                raise ValueError(f"x selects both cycle edges at vertex {cyc.vertices[a]}")
            y[model.spoke_ids[c][a]] = Fraction(val)
    return tuple(y)


def project_y_to_x(model: TransformedModel, y: Sequence) -> tuple[tuple[Fraction, ...], bool]:
    """Reconstruct x on G from transformed values (0, 1/2 or 1).

    Returns ``(x, ok)`` where ``ok`` is False if some reconstructed entry falls
    outside {0, 1/2, 1}.
    """
    if len(y) != model.edge_count:
        raise ValueError("y has the wrong length")
    x: list[Fraction] = [Fraction(0)] * model.base.edge_count
    for eid, idx in model.kept_ids.items():
        x[eid] = Fraction(y[idx])
    for c, cyc in enumerate(model.cycles):
        table = model.distance[c]
        spokes = [Fraction(y[i]) for i in model.spoke_ids[c]]
        for b, eid in enumerate(cyc.edge_ids):
            s = sum(v if table[a][b] % 2 == 0 else -v for a, v in enumerate(spokes))
            x[eid] = s / 2
    ok = all(v in _ALLOWED for v in x)
    return tuple(x), ok


def cycle_factor_accepts(spokes: Sequence, distance) -> bool:
    """Literal cycle-factor test: at most |C|-1 ones and every alternating
    spoke sum in {0, 2}."""
    k = len(spokes)
    if sum(spokes) > k - 1:
        return False
    for b in range(k):
        s = sum(v if distance[a][b] % 2 == 0 else -v for a, v in enumerate(spokes))
        if s not in (0, 2):
            return False
    return True
