"""Cutting-plane loops that grow the odd-cycle set from half-valued edges.

``cp_bp`` obtains x from belief propagation on the transformed model;
``cp_lp`` takes it from an exact vertex optimum of the relaxation instead.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .bp import DEFAULT_ITERATIONS, run_bp
from .graph import HALF, OddCycleSet, WeightedGraph, find_odd_cycle, validate_matching
from .lp import build_clp, check_tight_unique, solve
from .transform import build_transform, project_y_to_x


class Status(str, enum.Enum):
    MATCHING = "MATCHING"
    NON_HALF_INTEGRAL = "NON_HALF_INTEGRAL_TERMINATION"
    NO_ODD_CYCLE = "NO_ODD_CYCLE_FOUND"
    BUDGET_EXHAUSTED = "BUDGET_EXHAUSTED"
    # integral x that is not a matching; only reachable from unconverged BP
    NOT_A_MATCHING = "NOT_A_MATCHING"


@dataclass
class RoundRecord:
    round: int
    cycles: int
    zeros: int
    halves: int
    ones: int
    bp_rounds: int | None = None
    bp_converged: bool | None = None

    def as_dict(self) -> dict:
        return {k: v for k, v in self.__dict__.items() if v is not None}


@dataclass
class CPOutcome:
    status: Status
    x: tuple[Fraction, ...]
    cycles: OddCycleSet
    matching: tuple[int, ...] | None = None
    weight: int | None = None
    log: list[RoundRecord] = field(default_factory=list)

    @property
    def solved(self) -> bool:
        return self.status is Status.MATCHING

    @property
    def cycles_added(self) -> int:
        return len(self.cycles)


def _loop(graph: WeightedGraph, max_rounds: int | None,
          relax: Callable[[OddCycleSet], tuple[tuple[Fraction, ...], bool, dict]]) -> CPOutcome:
    if max_rounds is None:
        max_rounds = max(1, graph.edge_count)
    if max_rounds < 1:
        raise ValueError("max_rounds must be >= 1")
    cycles = OddCycleSet()
    log: list[RoundRecord] = []
    x: tuple[Fraction, ...] = tuple(Fraction(0) for _ in range(graph.edge_count))
    for r in range(1, max_rounds + 1):
        x, ok, extra = relax(cycles)
        halves = [e for e, v in enumerate(x) if v == HALF]
        ones = sum(1 for v in x if v == 1)
        log.append(RoundRecord(r, len(cycles), sum(1 for v in x if v == 0), len(halves), ones, **extra))
        if not ok:
            return CPOutcome(Status.NON_HALF_INTEGRAL, x, cycles, log=log)
        if not halves:
            chosen = tuple(e for e, v in enumerate(x) if v == 1)
            check = validate_matching(graph, chosen)
            if not check.ok:
                return CPOutcome(Status.NOT_A_MATCHING, x, cycles, log=log)
            return CPOutcome(Status.MATCHING, x, cycles, chosen, check.total_weight, log)
        cycle = find_odd_cycle(graph, halves, cycles.used_edges())
        if cycle is None:
            return CPOutcome(Status.NO_ODD_CYCLE, x, cycles, log=log)
        cycles = cycles.add(cycle)
    return CPOutcome(Status.BUDGET_EXHAUSTED, x, cycles, log=log)


def cp_bp(graph: WeightedGraph, iterations: int = DEFAULT_ITERATIONS,
          max_rounds: int | None = None) -> CPOutcome:
    """Cutting-plane BP: fresh BP on the transformed model each round."""
    if iterations < 2:
        raise ValueError("iterations must be >= 2")

    def relax(cycles):
        model = build_transform(graph, cycles)
        res = run_bp(model, iterations)
        x, ok = project_y_to_x(model, res.y)
        return x, ok, {"bp_rounds": res.rounds, "bp_converged": res.converged}

    return _loop(graph, max_rounds, relax)


def cp_lp(graph: WeightedGraph, max_rounds: int | None = None) -> CPOutcome:
    """Cutting-plane LP with exact vertex solutions."""

    def relax(cycles):
        sol = solve(build_clp(graph, cycles))
        # vertices are half-integral, so this never fires for an exact solve
        assert sol.is_half_integral, "non half-integral LP vertex"
        return sol.x, True, {}

    return _loop(graph, max_rounds, relax)


class Classification(str, enum.Enum):
    BASE_TIGHT = "BASE_TIGHT"
    SOLVED_WITH_CUTS = "SOLVED_WITH_CUTS"
    UNSOLVED = "UNSOLVED"


def classify_instance(graph: WeightedGraph, optimum: int, method: str = "cp-bp",
                      iterations: int = DEFAULT_ITERATIONS) -> Classification:
    """BASE_TIGHT when the cycle-free relaxation has a unique integral
    optimum; otherwise whether ``method`` reaches a matching of weight
    ``optimum``."""
    if check_tight_unique(graph).tight:
        return Classification.BASE_TIGHT
    out = cp_bp(graph, iterations) if method == "cp-bp" else cp_lp(graph)
    if out.solved and out.weight == optimum:
        return Classification.SOLVED_WITH_CUTS
    return Classification.UNSOLVED
