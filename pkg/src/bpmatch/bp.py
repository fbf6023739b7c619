"""Max-product belief propagation in the log domain with exact integers.

Messages are pairs ``(value at 0, value at 1)`` of integers, renormalised so
the larger entry is 0. Two factor families are supported on the transformed
model: vertex factors (at most one selected variable) and cycle factors
(spoke configurations that lift a matching of the contracted odd cycle).
A third family, the budget factor, attaches ``sum(x) <= (|C|-1)/2`` directly
to the edges of a cycle and exists only to reproduce the untransformed model.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable, Sequence

import numpy as np

from .graph import HALF, OddCycleSet, WeightedGraph, validate_cycles
from .transform import TransformedModel, cycle_distance, cycle_factor_accepts

VERTEX, CYCLE, BUDGET = "vertex", "cycle", "budget"

# stands in for -inf inside the cycle DP; never survives into a message
_NEG = -(1 << 80)
_NEG64 = -(1 << 62)
_OVERFLOW = 1 << 60

Pair = tuple[int, int]


@dataclass(frozen=True)
class Factor:
    kind: str
    variables: tuple[int, ...]   # in cycle order for CYCLE / BUDGET factors
    limit: int = 1               # BUDGET only: max number of ones


@dataclass(frozen=True)
class FactorGraph:
    weights: np.ndarray          # per variable, doubled scale
    factors: tuple[Factor, ...]
    slot_var: np.ndarray = field(repr=False)
    slot_factor: np.ndarray = field(repr=False)
    factor_slots: tuple[tuple[int, ...], ...] = field(repr=False)
    # contiguous layout of vertex-factor slots for the vectorised update
    vertex_slots: np.ndarray = field(repr=False)
    vertex_starts: np.ndarray = field(repr=False)
    vertex_group: np.ndarray = field(repr=False)

    @property
    def variable_count(self) -> int:
        return len(self.weights)

    @property
    def slot_count(self) -> int:
        return len(self.slot_var)

    def factors_of(self, var: int) -> list[int]:
        return [int(f) for f in self.slot_factor[self.slot_var == var]]

    def satisfies_degree_two(self) -> bool:
        counts = np.bincount(self.slot_var, minlength=self.variable_count)
        return bool(np.all(counts <= 2))


def _assemble(weights: Sequence[int], factors: list[Factor]) -> FactorGraph:
    # vertex factors first so their slots are contiguous
    factors = [f for f in factors if f.kind == VERTEX] + [f for f in factors if f.kind != VERTEX]
    slot_var, slot_factor, factor_slots = [], [], []
    for fi, fac in enumerate(factors):
        ids = []
        for v in fac.variables:
            ids.append(len(slot_var))
            slot_var.append(v)
            slot_factor.append(fi)
        factor_slots.append(tuple(ids))
    vfac = [fi for fi, f in enumerate(factors) if f.kind == VERTEX]
    vslots = [s for fi in vfac for s in factor_slots[fi]]
    starts, group = [], []
    for g, fi in enumerate(vfac):
        starts.append(len(group))
        group += [g] * len(factor_slots[fi])
    return FactorGraph(
        weights=np.asarray(weights, dtype=np.int64),
        factors=tuple(factors),
        slot_var=np.asarray(slot_var, dtype=np.int64),
        slot_factor=np.asarray(slot_factor, dtype=np.int64),
        factor_slots=tuple(factor_slots),
        vertex_slots=np.asarray(vslots, dtype=np.int64),
        vertex_starts=np.asarray(starts, dtype=np.int64),
        vertex_group=np.asarray(group, dtype=np.int64),
    )


def build_factor_graph(model: TransformedModel) -> FactorGraph:
    """Factor graph of the transformed model: one variable per edge of G'."""
    n = model.base.vertex_count
    scopes: list[list[int]] = [[] for _ in range(n)]
    for idx, (a, b, _) in enumerate(model.edges):
        for v in (a, b):
            if v < n:
                scopes[v].append(idx)
    factors = [Factor(VERTEX, tuple(s)) for s in scopes if s]
    factors += [Factor(CYCLE, ids) for ids in model.spoke_ids]
    return _assemble([w for _, _, w in model.edges], factors)


def build_baseline_factor_graph(graph: WeightedGraph, cycles: OddCycleSet = OddCycleSet()) -> FactorGraph:
    """Untransformed model: edge variables with budget factors on each cycle.

    Cycle edges then sit in three factors, so the degree-two property fails
    whenever ``cycles`` is non-empty.
    """
    validate_cycles(graph, cycles)
    factors = [Factor(VERTEX, s) for s in graph.incident if s]
    factors += [Factor(BUDGET, c.edge_ids, (len(c) - 1) // 2) for c in cycles]
    return _assemble([2 * w for _, _, w in graph.edges], factors)


# ---------------------------------------------------------------- factor ops

def vertex_factor_message(incoming: Sequence[Pair], target: int) -> Pair:
    """Raw (unnormalised) message from a vertex factor to ``incoming[target]``.

    out[1] forces every other variable to 0; out[0] additionally allows one of
    them to be 1. Uses best/second-best so all targets cost O(arity) overall.
    """
    return vertex_factor_messages(incoming)[target]


def vertex_factor_messages(incoming: Sequence[Pair]) -> list[Pair]:
    total0 = sum(m[0] for m in incoming)
    gains = [m[1] - m[0] for m in incoming]
    best = second = None
    best_at = -1
    for i, g in enumerate(gains):
        if best is None or g > best:
            best, second, best_at = g, best, i
        elif second is None or g > second:
            second = g
    out = []
    for t, m in enumerate(incoming):
        rest0 = total0 - m[0]
        other = second if t == best_at else best
        gain = 0 if other is None else max(0, other)
        out.append((rest0 + gain, rest0))
    return out


def cycle_factor_messages(incoming: Sequence[Pair], counter: list | None = None) -> list[Pair]:
    """Raw messages from a transformed cycle factor to every spoke.

    ``incoming[a]`` is the message from the spoke at cycle position ``a``.
    Valid spoke vectors are lifts of matchings x on the cycle edges, with
    y_a = x_{a-1} + x_a. For each value f of the closing edge x_{k-1} a
    forward and a backward max-sum pass over the edge chain give every
    target in O(k).
    """
    k = len(incoming)
    if k < 3 or k % 2 == 0:
        raise ValueError("cycle factors need an odd cycle of length >= 3")
    best = [[_NEG, _NEG] for _ in range(k)]
    ops = 0
    for f in (0, 1):
        # fwd[a][s]: best sum of vertex terms 0..a-1 with x_{a-1} = s
        fwd = [[_NEG, _NEG] for _ in range(k + 1)]
        fwd[0][f] = 0
        for a in range(k):
            m = incoming[a]
            for t in (0, 1):
                if a == k - 1 and t != f:
                    continue
                cand = _NEG
                for s in (0, 1):
                    if s + t <= 1 and fwd[a][s] > _NEG:
                        cand = max(cand, fwd[a][s] + m[s + t])
                fwd[a + 1][t] = cand
                ops += 2
        # bwd[a][s]: best sum of vertex terms a..k-1 given x_{a-1} = s
        bwd = [[_NEG, _NEG] for _ in range(k + 1)]
        bwd[k][f] = 0
        for a in range(k - 1, -1, -1):
            m = incoming[a]
            for s in (0, 1):
                cand = _NEG
                for t in (0, 1):
                    if s + t <= 1 and bwd[a + 1][t] > _NEG:
                        cand = max(cand, m[s + t] + bwd[a + 1][t])
                bwd[a][s] = cand
                ops += 2
        for a in range(k):
            for s, t in ((0, 0), (1, 0), (0, 1)):
                if fwd[a][s] > _NEG and bwd[a + 1][t] > _NEG:
                    v = fwd[a][s] + bwd[a + 1][t]
                    if v > best[a][s + t]:
                        best[a][s + t] = v
            ops += 3
    if counter is not None:
        counter[0] += ops
    return [(b0, b1) for b0, b1 in best]


def cycle_factor_message(incoming: Sequence[Pair], target: int) -> Pair:
    return cycle_factor_messages(incoming)[target]


def budget_factor_messages(incoming: Sequence[Pair], limit: int) -> list[Pair]:
    """Raw messages from a factor allowing at most ``limit`` ones."""
    total0 = sum(m[0] for m in incoming)
    gains = [m[1] - m[0] for m in incoming]
    order = sorted(range(len(gains)), key=lambda i: -gains[i])
    out = []
    for t, m in enumerate(incoming):
        rest0 = total0 - m[0]
        vals = []
        for b in (0, 1):
            room = limit - b
            if room < 0:
                vals.append(_NEG)
                continue
            acc, taken = 0, 0
            for i in order:
                if taken >= room or gains[i] <= 0:
                    break
                if i == t:
                    continue
                acc += gains[i]
                taken += 1
            vals.append(rest0 + acc)
        out.append((vals[0], vals[1]))
    return out


# ---------------------------------------------------------------- rounds

@dataclass(frozen=True)
class BPState:
    var_to_factor: np.ndarray    # (slots, 2)
    factor_to_var: np.ndarray    # (slots, 2)
    t: int = 0


def initial_state(fg: FactorGraph) -> BPState:
    z = np.zeros((fg.slot_count, 2), dtype=np.int64)
    return BPState(z, z.copy(), 0)


def _normalize(m: np.ndarray) -> np.ndarray:
    return m - m.max(axis=1, keepdims=True)


def beliefs(fg: FactorGraph, state: BPState) -> np.ndarray:
    """Log-beliefs n[v] = (0, w_v) + sum of factor messages into v."""
    n = np.zeros((fg.variable_count, 2), dtype=np.int64)
    n[:, 1] = fg.weights
    np.add.at(n, fg.slot_var, state.factor_to_var)
    return n


def bp_round(fg: FactorGraph, state: BPState, counter: list | None = None) -> BPState:
    """One flooding round: every variable-to-factor message from the current
    factor messages, then every factor-to-variable message from those."""
    n = beliefs(fg, state)
    v2f = _normalize(n[fg.slot_var] - state.factor_to_var)
    f2v = factor_messages(fg, v2f, counter)
    if v2f.size and (np.abs(v2f).max() > _OVERFLOW or np.abs(f2v).max() > _OVERFLOW):
        raise OverflowError("message magnitude exceeded the int64 safety margin")
    return BPState(v2f, f2v, state.t + 1)


def factor_messages(fg: FactorGraph, v2f: np.ndarray, counter: list | None = None) -> np.ndarray:
    """Normalised factor-to-variable messages for every slot given the
    variable-to-factor table."""
    f2v = np.zeros_like(v2f)

    vs = fg.vertex_slots
    if vs.size:
        gain = v2f[vs, 1] - v2f[vs, 0]
        grp = fg.vertex_group
        top = np.maximum.reduceat(gain, fg.vertex_starts)
        is_top = gain == top[grp]
        n_top = np.add.reduceat(is_top.astype(np.int64), fg.vertex_starts)
        second = np.maximum.reduceat(np.where(is_top, _NEG64, gain), fg.vertex_starts)
        excl = np.where(is_top & (n_top[grp] == 1), second[grp], top[grp])
        f2v[vs, 1] = -np.maximum(excl, 0)
        if counter is not None:
            counter[0] += 4 * int(vs.size)

    v2f_list = None
    for fi, fac in enumerate(fg.factors):
        if fac.kind == VERTEX:
            continue
        if v2f_list is None:
            v2f_list = v2f.tolist()
        slots = fg.factor_slots[fi]
        inc = [tuple(v2f_list[s]) for s in slots]
        if fac.kind == CYCLE:
            out = cycle_factor_messages(inc, counter)
        else:
            out = budget_factor_messages(inc, fac.limit)
            if counter is not None:
                counter[0] += len(inc) * len(inc)
        for s, (o0, o1) in zip(slots, out):
            top = max(o0, o1)
            f2v[s, 0] = o0 - top
            f2v[s, 1] = o1 - top

    if counter is not None:
        counter[0] += 2 * fg.slot_count
    return f2v


def decide(belief: np.ndarray) -> list[Fraction]:
    out = []
    for n0, n1 in belief.tolist():
        out.append(Fraction(1) if n1 > n0 else Fraction(0) if n1 < n0 else HALF)
    return out


def decode(belief_now: np.ndarray, belief_prev: np.ndarray) -> tuple[Fraction, ...]:
    """1 if both rounds strictly prefer 1, 0 if both strictly prefer 0, else 1/2."""
    out = []
    for (a0, a1), (b0, b1) in zip(belief_now.tolist(), belief_prev.tolist()):
        if a1 > a0 and b1 > b0:
            out.append(Fraction(1))
        elif a1 < a0 and b1 < b0:
            out.append(Fraction(0))
        else:
            out.append(HALF)
    return tuple(out)


def _count_halves(belief_now: np.ndarray, belief_prev: np.ndarray) -> int:
    a = np.sign(belief_now[:, 1] - belief_now[:, 0])
    b = np.sign(belief_prev[:, 1] - belief_prev[:, 0])
    return int(np.count_nonzero((a != b) | (a == 0)))


@dataclass
class BPResult:
    y: tuple[Fraction, ...]
    converged: bool
    rounds: int
    state: BPState
    trace: list = field(default_factory=list)


DEFAULT_ITERATIONS = 1000


def run_bp(
    target: TransformedModel | FactorGraph,
    iterations: int = DEFAULT_ITERATIONS,
    trace: Callable[[int, int, bool], None] | None = None,
) -> BPResult:
    """Run up to ``iterations`` rounds, stopping early once every message
    table repeats exactly; decode from the last two rounds."""
    if iterations < 2:
        raise ValueError("need at least two rounds to decode")
    fg = target if isinstance(target, FactorGraph) else build_factor_graph(target)
    state = initial_state(fg)
    belief = beliefs(fg, state)
    prev_belief = belief
    converged = False
    log = []
    for _ in range(iterations):
        new = bp_round(fg, state)
        repeated = (np.array_equal(new.var_to_factor, state.var_to_factor)
                    and np.array_equal(new.factor_to_var, state.factor_to_var))
        state = new
        prev_belief, belief = belief, beliefs(fg, state)
        halves = _count_halves(belief, prev_belief)
        log.append((state.t, halves, repeated))
        if trace is not None:
            trace(state.t, halves, repeated)
        if repeated:
            converged = True
            break
    return BPResult(decode(belief, prev_belief), converged, state.t, state, log)


# ---------------------------------------------------------------- brute force

def brute_force_factor(kind: str, k: int, limit: int = 1) -> list[tuple[int, ...]]:
    """All accepted 0/1 configurations of a factor of arity k (k small)."""
    configs = []
    for y in product((0, 1), repeat=k):
        if kind == VERTEX and sum(y) <= 1:
            configs.append(y)
        elif kind == BUDGET and sum(y) <= limit:
            configs.append(y)
        elif kind == CYCLE and _cycle_accepts(y):
            configs.append(y)
    return configs


def _cycle_accepts(y: Sequence[int]) -> bool:
    k = len(y)
    table = [[cycle_distance(k, a, b) for b in range(k)] for a in range(k)]
    return cycle_factor_accepts(y, table)
