"""Exact rational LP for the cycle-augmented matching relaxation.

The simplex works on a dense tableau whose rows are Python integer lists,
each with its own positive denominator, so every pivot is exact. Pricing is
Dantzig's rule; after a run of degenerate pivots it falls back to Bland's
rule until the objective moves again, which rules out cycling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .graph import HALF, OddCycleSet, WeightedGraph, validate_cycles
from .transform import TransformedModel

LE, GE = "<=", ">="
_STALL = 20


class LPError(ArithmeticError):
    pass


@dataclass(frozen=True)
class Row:
    coeffs: dict[int, Fraction]
    sense: str
    rhs: Fraction
    tag: tuple = ()


@dataclass
class RationalLP:
    """maximize objective . x  subject to rows, 0 <= x_j <= upper[j]."""

    objective: list[Fraction]
    rows: list[Row] = field(default_factory=list)
    upper: list[Fraction | None] = field(default_factory=list)
    names: list[str] = field(default_factory=list)

    @property
    def variable_count(self) -> int:
        return len(self.objective)

    def add_row(self, coeffs: dict[int, int | Fraction], sense: str, rhs, tag: tuple = ()):
        if sense not in (LE, GE):
            raise ValueError(f"bad relation {sense!r}")
        self.rows.append(Row({j: Fraction(a) for j, a in coeffs.items() if a}, sense, Fraction(rhs), tag))

    def residuals_ok(self, x: Sequence[Fraction]) -> bool:
        """Exact feasibility check of ``x`` against every row and bound."""
        for j, v in enumerate(x):
            if v < 0 or (self.upper[j] is not None and v > self.upper[j]):
                return False
        for row in self.rows:
            lhs = sum((a * x[j] for j, a in row.coeffs.items()), Fraction(0))
            if (row.sense == LE and lhs > row.rhs) or (row.sense == GE and lhs < row.rhs):
                return False
        return True

    def to_lp_format(self) -> str:
        """CPLEX-style LP text for cross-checking with external solvers."""
        name = self.names if self.names else [f"x{j}" for j in range(self.variable_count)]

        def expr(coeffs):
            parts = []
            for j, a in coeffs:
                a = int(a) if a.denominator == 1 else float(a)
                parts.append(f"{'-' if a < 0 else '+'} {abs(a)} {name[j]}")
            if not parts:
                return f"0 {name[0]}" if name else "0"
            text = " ".join(parts)
            return text[2:] if text.startswith("+ ") else text

        out = ["Maximize", " obj: " + expr([(j, c) for j, c in enumerate(self.objective) if c]), "Subject To"]
        for i, row in enumerate(self.rows):
            label = "_".join(str(t) for t in row.tag) or f"r{i}"
            rhs = row.rhs if row.rhs.denominator != 1 else int(row.rhs)
            out.append(f" {label}: {expr(sorted(row.coeffs.items()))} {row.sense} {rhs}")
        out.append("Bounds")
        for j in range(self.variable_count):
            u = self.upper[j]
            out.append(f" 0 <= {name[j]}" + ("" if u is None else f" <= {u}"))
        out.append("End")
        return "\n".join(out) + "\n"


@dataclass(frozen=True)
class LPSolution:
    x: tuple[Fraction, ...]
    value: Fraction
    basis: tuple[int, ...]
    pivots: int
    unique: bool | None = None

    @property
    def is_integral(self) -> bool:
        return all(v.denominator == 1 for v in self.x)

    @property
    def is_half_integral(self) -> bool:
        return all(v.denominator in (1, 2) for v in self.x)


# ---------------------------------------------------------------- builders

def build_clp(graph: WeightedGraph, cycles: OddCycleSet = OddCycleSet()) -> RationalLP:
    validate_cycles(graph, cycles)
    lp = RationalLP([Fraction(w) for _, _, w in graph.edges],
                    upper=[Fraction(1)] * graph.edge_count,
                    names=[f"x_{u}_{v}" for u, v, _ in graph.edges])
    for i, inc in enumerate(graph.incident):
        lp.add_row({e: 1 for e in inc}, LE, 1, ("VERTEX", i))
    for c, cyc in enumerate(cycles):
        lp.add_row({e: 1 for e in cyc.edge_ids}, LE, (len(cyc) - 1) // 2, ("CYCLE", c))
    return lp


def build_clp_prime(model: TransformedModel) -> RationalLP:
    """Relaxation over the transformed variables, objective at doubled scale."""
    lp = RationalLP([Fraction(w) for _, _, w in model.edges],
                    upper=[Fraction(1)] * model.edge_count,
                    names=[f"y_{a}_{b}" for a, b, _ in model.edges])
    n = model.base.vertex_count
    scopes: list[list[int]] = [[] for _ in range(n)]
    for idx, (a, b, _) in enumerate(model.edges):
        for v in (a, b):
            if v < n:
                scopes[v].append(idx)
    for i, s in enumerate(scopes):
        lp.add_row({e: 1 for e in s}, LE, 1, ("VERTEX", i))
    for c, cyc in enumerate(model.cycles):
        spokes = model.spoke_ids[c]
        k = len(spokes)
        lp.add_row({e: 1 for e in spokes}, LE, k - 1, ("DEGREE", c))
        for b, eid in enumerate(cyc.edge_ids):
            coeffs = {spokes[a]: (1 if model.distance[c][a][b] % 2 == 0 else -1) for a in range(k)}
            lp.add_row(coeffs, GE, 0, ("ALT_SUM", c, eid))
            lp.add_row(coeffs, LE, 2, ("ALT_SUM", c, eid))
    return lp


# ---------------------------------------------------------------- simplex

class _Tableau:
    def __init__(self, lp: RationalLP):
        n = lp.variable_count
        rows = list(lp.rows)
        for j, u in enumerate(lp.upper):
            if u is not None and not _bound_implied(lp, j, u):
                rows.append(Row({j: Fraction(1)}, LE, u, ("BOX", j)))
        m = len(rows)
        # columns: n structural, m slacks, then artificials as needed
        art_rows = []
        prepared = []
        for i, row in enumerate(rows):
            coeffs = dict(row.coeffs)
            rhs = row.rhs
            slack = 1
            if row.sense == GE:
                coeffs = {j: -a for j, a in coeffs.items()}
                rhs = -rhs
            if rhs < 0:
                coeffs = {j: -a for j, a in coeffs.items()}
                rhs, slack = -rhs, -1
                art_rows.append(i)
            prepared.append((coeffs, slack, rhs))
        self.n, self.m = n, m
        self.ncols = n + m + len(art_rows)
        self.artificial = set(range(n + m, self.ncols))
        self.rows: list[list[int]] = []
        self.den: list[int] = []
        self.basis: list[int] = []
        art_of = {i: n + m + a for a, i in enumerate(art_rows)}
        for i, (coeffs, slack, rhs) in enumerate(prepared):
            vals = [Fraction(0)] * (self.ncols + 1)
            for j, a in coeffs.items():
                vals[j] = a
            vals[n + i] = Fraction(slack)
            vals[-1] = rhs
            if i in art_of:
                vals[art_of[i]] = Fraction(1)
                self.basis.append(art_of[i])
            else:
                self.basis.append(n + i)
            ints, d = _to_ints(vals)
            self.rows.append(ints)
            self.den.append(d)
        self.banned: set[int] = set()
        self.pivots = 0

    # objective row stored as ints: z[j]/zd = z_j - c_j, z[-1]/zd = objective value
    def set_objective(self, cost: dict[int, Fraction]):
        acc = [Fraction(0)] * (self.ncols + 1)
        for j, c in cost.items():
            acc[j] -= c
        for i, b in enumerate(self.basis):
            cb = cost.get(b)
            if cb:
                r, d = self.rows[i], self.den[i]
                for j, v in enumerate(r):
                    if v:
                        acc[j] += cb * Fraction(v, d)
        self.z, self.zd = _to_ints(acc)

    def pivot(self, p: int, q: int):
        rp = self.rows[p]
        a = rp[q]
        if a < 0:
            rp = [-v for v in rp]
            a = -a
        g = math.gcd(a, *rp)
        if g > 1:
            rp = [v // g for v in rp]
            a //= g
        self.rows[p], self.den[p] = rp, a
        for i in range(self.m):
            if i == p:
                continue
            r = self.rows[i]
            c = r[q]
            if c:
                self.rows[i], self.den[i] = _eliminate(r, self.den[i], rp, a, c)
        c = self.z[q]
        if c:
            self.z, self.zd = _eliminate(self.z, self.zd, rp, a, c)
        self.basis[p] = q
        self.pivots += 1

    def entering(self, bland: bool) -> int | None:
        z, banned = self.z, self.banned
        best, best_val = None, 0
        for j in range(self.ncols):
            v = z[j]
            if v < 0 and j not in banned:
                if bland:
                    return j
                if v < best_val:
                    best, best_val = j, v
        return best

    def leaving(self, q: int) -> int | None:
        best = None
        bn = bd = 0
        for i in range(self.m):
            r = self.rows[i]
            a = r[q]
            if a > 0:
                num = r[-1]
                if best is None:
                    best, bn, bd = i, num, a
                    continue
                lhs, rhs = num * bd, bn * a
                if lhs < rhs or (lhs == rhs and self.basis[i] < self.basis[best]):
                    best, bn, bd = i, num, a
        return best

    def optimize(self):
        stall = 0
        while True:
            q = self.entering(bland=stall >= _STALL)
            if q is None:
                return
            p = self.leaving(q)
            if p is None:
                raise LPError("LP is unbounded")
            degenerate = self.rows[p][-1] == 0
            self.pivot(p, q)
            stall = stall + 1 if degenerate else 0

    def value(self) -> Fraction:
        return Fraction(self.z[-1], self.zd)

    def primal(self) -> list[Fraction]:
        x = [Fraction(0)] * self.ncols
        for i, b in enumerate(self.basis):
            x[b] = Fraction(self.rows[i][-1], self.den[i])
        return x


def _eliminate(r: list[int], d: int, rp: list[int], a: int, c: int) -> tuple[list[int], int]:
    # (r/d) - (c/d) * (rp/a)  ==  (a*r - c*rp) / (a*d)
    new = [a * u - c * v for u, v in zip(r, rp)]
    nd = a * d
    g = math.gcd(nd, *new)
    if g > 1:
        new = [v // g for v in new]
        nd //= g
    return new, nd


def _to_ints(vals: Sequence[Fraction]) -> tuple[list[int], int]:
    d = 1
    for v in vals:
        if v.denominator != 1:
            d = math.lcm(d, v.denominator)
    return [int(v * d) for v in vals], d


def _bound_implied(lp: RationalLP, j: int, u: Fraction) -> bool:
    # x_j <= u follows from a <= row with nonnegative coefficients
    for row in lp.rows:
        a = row.coeffs.get(j)
        if row.sense == LE and a and a > 0 and row.rhs / a <= u and all(v >= 0 for v in row.coeffs.values()):
            return True
    return False


def solve(lp: RationalLP, check_unique: bool = False) -> LPSolution:
    """Exact vertex optimum of a feasible, bounded LP.

    With ``check_unique`` the optimal face is probed: every nonbasic column
    with positive reduced cost is fixed at zero, and the sum of the remaining
    nonbasic columns is maximised over what is left. The optimum is unique
    exactly when that auxiliary maximum is zero.
    """
    tab = _Tableau(lp)
    if tab.artificial:
        tab.set_objective({j: Fraction(-1) for j in tab.artificial})
        tab.optimize()
        if tab.value() < 0:
            raise LPError("LP is infeasible")
        _drive_out_artificials(tab)
        tab.banned |= tab.artificial
    tab.set_objective({j: c for j, c in enumerate(lp.objective) if c})
    tab.optimize()
    full = tab.primal()
    x = tuple(full[: lp.variable_count])
    value = sum((c * v for c, v in zip(lp.objective, x)), Fraction(0))
    basis = tuple(sorted(b for b in tab.basis))
    unique = None
    if check_unique:
        unique = _optimum_is_unique(tab)
    return LPSolution(x, value, basis, tab.pivots, unique)


def _drive_out_artificials(tab: _Tableau):
    for i in range(tab.m):
        if tab.basis[i] in tab.artificial:
            r = tab.rows[i]
            q = next((j for j in range(tab.ncols) if r[j] and j not in tab.artificial), None)
            if q is not None:
                tab.pivot(i, q)


def _optimum_is_unique(tab: _Tableau) -> bool:
    basic = set(tab.basis)
    zero = []
    for j in range(tab.ncols):
        if j in basic or j in tab.banned:
            continue
        if tab.z[j] == 0:
            zero.append(j)
        else:
            tab.banned.add(j)
    if not zero:
        return True
    tab.set_objective({j: Fraction(1) for j in zero})
    tab.optimize()
    return tab.value() == 0


# ---------------------------------------------------------------- queries

@dataclass(frozen=True)
class Tightness:
    tight: bool
    unique: bool
    solution: LPSolution


def check_tight_unique(graph: WeightedGraph, cycles: OddCycleSet = OddCycleSet()) -> Tightness:
    """Tight means the optimum is a unique integral vertex.

    A non-unique optimum is never reported tight: the face may hold a
    fractional vertex at the same value, as in the {2,1,1} triangle.
    """
    sol = solve(build_clp(graph, cycles), check_unique=True)
    return Tightness(sol.is_integral and bool(sol.unique), bool(sol.unique), sol)


def lift_solution(model: TransformedModel, x: Sequence[Fraction]) -> tuple[Fraction, ...]:
    """Linear x -> y map, valid for fractional x as well."""
    y = [Fraction(0)] * model.edge_count
    for eid, idx in model.kept_ids.items():
        y[idx] = Fraction(x[eid])
    for c, cyc in enumerate(model.cycles):
        for a in range(len(cyc)):
            y[model.spoke_ids[c][a]] = Fraction(x[cyc.edge_ids[a - 1]]) + Fraction(x[cyc.edge_ids[a]])
    return tuple(y)


def is_half(v: Fraction) -> bool:
    return v == HALF
