"""Operation count of one BP round on transformed models of growing size.

Cycles are added greedily (disjoint odd cycles from the BFS finder) so the
cycle-factor DP is exercised alongside the vertex factors.
"""

import argparse
import time

from bpmatch.bp import bp_round, build_factor_graph, initial_state
from bpmatch.graph import OddCycleSet, find_odd_cycle, generate_instance
from bpmatch.transform import build_transform


def cycle_cover(g, limit):
    cycles = OddCycleSet()
    while len(cycles) < limit:
        c = find_odd_cycle(g, forbidden_edges=cycles.used_edges())
        if c is None:
            break
        cycles = cycles.add(c)
    return cycles


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, nargs="+", default=[25, 50, 100, 200])
    ap.add_argument("--p", type=float, default=0.5)
    ap.add_argument("--rounds", type=int, default=20)
    args = ap.parse_args()

    print(f"{'n':>5} {'|E|':>7} {'cycles':>7} {'ops/round':>10} {'ops/|V||E|':>11} {'ms/round':>9}")
    for n in args.n:
        g = generate_instance(n, args.p, 1 << 20, n)
        cycles = cycle_cover(g, n // 3)
        fg = build_factor_graph(build_transform(g, cycles))
        state = initial_state(fg)
        counter = [0]
        start = time.perf_counter()
        for _ in range(args.rounds):
            state = bp_round(fg, state, counter)
        ms = 1000 * (time.perf_counter() - start) / args.rounds
        ops = counter[0] / args.rounds
        print(f"{n:>5} {g.edge_count:>7} {len(cycles):>7} {ops:>10.0f} {ops / (n * g.edge_count):>11.4f} {ms:>9.2f}")


if __name__ == "__main__":
    main()
