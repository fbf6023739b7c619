import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import linprog

from bpmatch.graph import HALF, OddCycle, OddCycleSet, WeightedGraph
from bpmatch.lp import (
    GE,
    LE,
    LPError,
    RationalLP,
    build_clp,
    build_clp_prime,
    check_tight_unique,
    lift_solution,
    solve,
)
from bpmatch.transform import build_transform

from conftest import graphs_with_cycles, random_cycle_set, random_graph, ring, triangle


def float_lp(lp: RationalLP, objective=None):
    """The same LP through HiGHS in floating point."""
    c = -np.array([float(v) for v in (objective or lp.objective)])
    a_ub, b_ub = [], []
    for row in lp.rows:
        vec = np.zeros(lp.variable_count)
        for j, a in row.coeffs.items():
            vec[j] = float(a)
        sign = 1 if row.sense == LE else -1
        a_ub.append(sign * vec)
        b_ub.append(sign * float(row.rhs))
    bounds = [(0, None if u is None else float(u)) for u in lp.upper]
    return linprog(c, A_ub=np.array(a_ub) if a_ub else None, b_ub=b_ub or None,
                   bounds=bounds, method="highs")


def float_unique(lp: RationalLP, value: float) -> bool:
    """Optimal face is a single point iff every coordinate has zero range on it."""
    face = RationalLP(lp.objective, list(lp.rows), lp.upper)
    face.add_row({j: c for j, c in enumerate(lp.objective)}, GE, Fraction(value) - Fraction(1, 10**7))
    for j in range(lp.variable_count):
        unit = [Fraction(int(i == j)) for i in range(lp.variable_count)]
        hi = -float_lp(face, unit).fun
        lo = float_lp(face, [-v for v in unit]).fun
        if hi - lo > 1e-5:
            return False
    return True


def test_triangle_relaxations():
    g = triangle()
    sol = solve(build_clp(g))
    assert sol.value == 2
    t = check_tight_unique(g)
    # (1,0,0) and (1/2,1/2,1/2) are both optimal
    assert not t.unique and not t.tight
    cyc = OddCycleSet((OddCycle.from_vertices(g, [0, 1, 2]),))
    t = check_tight_unique(g, cyc)
    assert t.tight and t.solution.x == (1, 0, 0)


def test_five_cycle_half_vertex():
    g = ring(5)
    t = check_tight_unique(g)
    assert t.solution.value == Fraction(5, 2)
    assert t.solution.x == (HALF,) * 5 and t.unique and not t.tight
    t = check_tight_unique(g, OddCycleSet((OddCycle.from_vertices(g, range(5)),)))
    assert t.solution.value == 2 and t.solution.is_integral
    assert not t.unique


def test_single_edge_and_empty():
    t = check_tight_unique(WeightedGraph.from_edges(2, [(0, 1, 7)]))
    assert t.tight and t.solution.x == (1,)
    sol = solve(build_clp(WeightedGraph.from_edges(3, [])))
    assert sol.x == () and sol.value == 0


def test_phase_one_and_interval_rows():
    # maximize x0 + x1 s.t. x0 + x1 >= 1, x0 - x1 <= 0, x0 <= 1/3, x1 <= 1
    lp = RationalLP([Fraction(1), Fraction(1)], upper=[Fraction(1, 3), Fraction(1)])
    lp.add_row({0: 1, 1: 1}, GE, 1)
    lp.add_row({0: 1, 1: -1}, LE, 0)
    sol = solve(lp)
    assert sol.x == (Fraction(1, 3), 1) and sol.value == Fraction(4, 3)
    assert lp.residuals_ok(sol.x)


def test_infeasible_raises():
    lp = RationalLP([Fraction(1)], upper=[Fraction(1)])
    lp.add_row({0: 1}, GE, 2)
    with pytest.raises(LPError):
        solve(lp)


def test_lp_text_dump():
    text = build_clp(triangle()).to_lp_format()
    assert text.startswith("Maximize\n obj: 2 x_0_1 + 1 x_1_2 + 1 x_0_2")
    assert " VERTEX_1: 1 x_0_1 + 1 x_1_2 <= 1" in text
    assert text.rstrip().endswith("End")


@settings(max_examples=120, deadline=None)
@given(graphs_with_cycles(max_n=9, w_max=30))
def test_clp_value_matches_float_solver(case):
    g, cycles = case
    lp = build_clp(g, cycles)
    sol = solve(lp)
    assert lp.residuals_ok(sol.x)
    assert sol.is_half_integral
    if g.edge_count == 0:
        assert sol.value == 0
        return
    assert abs(float(sol.value) - (-float_lp(lp).fun)) < 1e-6


@settings(max_examples=60, deadline=None)
@given(graphs_with_cycles(max_n=6, w_max=4))
def test_uniqueness_matches_float_probe(case):
    # small weights make ties, and so non-unique optima, common
    g, cycles = case
    lp = build_clp(g, cycles)
    t = check_tight_unique(g, cycles)
    if g.edge_count == 0:
        assert t.unique
        return
    assert t.unique == float_unique(lp, float(t.solution.value))


@settings(max_examples=120, deadline=None)
@given(graphs_with_cycles(max_n=9, w_max=30))
def test_clp_prime_agrees(case):
    g, cycles = case
    model = build_transform(g, cycles)
    base = check_tight_unique(g, cycles)
    prime_lp = build_clp_prime(model)
    prime = solve(prime_lp)
    assert prime.value == 2 * base.solution.value
    if base.tight:
        y = lift_solution(model, base.solution.x)
        assert prime_lp.residuals_ok(y)
        assert sum(c * v for c, v in zip(prime_lp.objective, y)) == prime.value


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_half_integral_for_arbitrary_objectives(seed):
    rng = random.Random(seed)
    g = random_graph(rng, rng.randint(3, 11), 0.6, 10)
    cycles = random_cycle_set(g, rng)
    lp = build_clp(g, cycles)
    lp.objective = [Fraction(rng.randint(-20, 60)) for _ in lp.objective]
    sol = solve(lp, check_unique=True)
    assert sol.is_half_integral and lp.residuals_ok(sol.x)


def test_degenerate_instance_terminates():
    # complete graph with equal weights: heavy degeneracy
    g = WeightedGraph.from_edges(9, [(u, v, 1) for u in range(9) for v in range(u + 1, 9)])
    t = check_tight_unique(g)
    assert t.solution.value == Fraction(9, 2) and not t.unique
