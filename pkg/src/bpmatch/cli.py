"""Command-line front end: generate, solve, bench."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .bench import W_MAX, BenchConfig, run_bench
from .bp import DEFAULT_ITERATIONS, build_baseline_factor_graph, run_bp
from .cutting_plane import CPOutcome, Status, cp_bp, cp_lp
from .graph import GraphFormatError, OddCycleSet, generate_instance, parse_cycles, parse_graph, validate_matching
from .oracle import OracleTooLarge, brute_force_mwm
from .transform import build_transform

MODES = ("cp-bp", "cp-lp", "bp-bare", "exact")

EXIT_OK = 0
EXIT_UNSOLVED = 1
EXIT_ERROR = 2


def _frac(v) -> str | int:
    return int(v) if v.denominator == 1 else str(v)


def _outcome_json(out: CPOutcome, mode: str) -> dict:
    return {
        "mode": mode,
        "status": out.status.value,
        "matching": list(out.matching) if out.matching is not None else None,
        "weight": out.weight,
        "rounds": len(out.log),
        "cycles_added": out.cycles_added,
        "cycles": [list(c.vertices) for c in out.cycles],
        "log": [r.as_dict() for r in out.log],
        "x": [_frac(v) for v in out.x],
    }


def cmd_generate(args) -> int:
    g = generate_instance(args.n, args.p, args.w_max, args.seed)
    _write(args.out, g.to_text())
    return EXIT_OK


def cmd_solve(args) -> int:
    text = Path(args.instance).read_text()
    graph = parse_graph(text)
    cycles = OddCycleSet()
    if args.cycles:
        cycles = parse_cycles(graph, Path(args.cycles).read_text())

    if args.dump_transformed:
        model = build_transform(graph, cycles)
        Path(args.dump_transformed).write_text(model.to_text())
        Path(args.dump_transformed + ".prov").write_text(model.provenance_text())

    trace = None
    if args.trace:
        trace = lambda t, halves, repeated: print(f"{t} {halves} {int(repeated)}", file=sys.stderr)

    if args.mode == "exact":
        res = brute_force_mwm(graph)
        result = {"mode": "exact", "status": Status.MATCHING.value, "matching": list(res.support),
                  "weight": res.objective, "unique": res.is_unique, "runner_up": res.runner_up}
        code = EXIT_OK
    elif args.mode == "bp-bare":
        res = run_bp(build_baseline_factor_graph(graph, cycles), args.iterations, trace)
        chosen = tuple(e for e, v in enumerate(res.y) if v == 1)
        decided = res.converged and all(v in (0, 1) for v in res.y)
        check = validate_matching(graph, chosen)
        if not res.converged:
            status = Status.BUDGET_EXHAUSTED.value
        elif decided and check.ok:
            status = Status.MATCHING.value
        else:
            status = "UNDECIDED"
        result = {"mode": "bp-bare", "status": status, "converged": res.converged,
                  "rounds": res.rounds, "cycles_added": 0,
                  "matching": list(chosen) if status == Status.MATCHING.value else None,
                  "weight": check.total_weight if status == Status.MATCHING.value else None,
                  "x": [_frac(v) for v in res.y]}
        code = EXIT_OK if status == Status.MATCHING.value else EXIT_UNSOLVED
    else:
        if args.mode == "cp-bp":
            out = cp_bp(graph, args.iterations, args.max_rounds)
        else:
            out = cp_lp(graph, args.max_rounds)
        result = _outcome_json(out, args.mode)
        code = EXIT_OK if out.solved else EXIT_UNSOLVED

    _write(args.out, json.dumps(result, indent=2) + "\n")
    return code


def cmd_bench(args) -> int:
    configs = [BenchConfig(n, p, args.count, args.seed, args.w_max, args.iterations, args.max_rounds)
               for n in args.n for p in args.p]
    progress = None
    if args.verbose:
        progress = lambda r: print(f"n={r.n} p={r.p} seed={r.seed} |E|={r.edges} tight={r.tight} "
                                   f"cp-bp={r.cp_bp_status} cp-lp={r.cp_lp_status}", file=sys.stderr)
    report = run_bench(configs, args.workers, progress)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "bench.json").write_text(report.to_json() + "\n")
        (out / "instances.csv").write_text(report.rows_csv())
        (out / "summary.csv").write_text(report.summary_csv())
    print(report.table())
    return EXIT_OK


def _write(path: str | None, text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bpmatch", description="Cutting-plane max-product BP for maximum weight matching.")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="write a random instance")
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--p", type=float, required=True, help="edge removal probability")
    gen.add_argument("--w-max", type=int, default=W_MAX)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", default="-")
    gen.set_defaults(func=cmd_generate)

    solve = sub.add_parser("solve", help="solve one instance file")
    solve.add_argument("instance")
    solve.add_argument("--mode", choices=MODES, default="cp-bp")
    solve.add_argument("--iterations", type=int, default=DEFAULT_ITERATIONS)
    solve.add_argument("--max-rounds", type=int, default=None, help="default: |E|")
    solve.add_argument("--cycles", help="cycle sidecar file; attached to the bp-bare model")
    solve.add_argument("--dump-transformed", metavar="PATH",
                       help="write the transformed instance and a PATH.prov sidecar")
    solve.add_argument("--trace", action="store_true", help="per-round BP trace on stderr (bp-bare)")
    solve.add_argument("--seed", type=int, default=0, help="accepted for interface symmetry; solving is deterministic")
    solve.add_argument("--out", default="-")
    solve.set_defaults(func=cmd_solve)

    bench = sub.add_parser("bench", help="random-instance benchmark")
    bench.add_argument("--n", type=int, nargs="+", default=[50])
    bench.add_argument("--p", type=float, nargs="+", default=[0.5, 0.9])
    bench.add_argument("--count", type=int, default=100)
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--w-max", type=int, default=W_MAX)
    bench.add_argument("--iterations", type=int, default=DEFAULT_ITERATIONS)
    bench.add_argument("--max-rounds", type=int, default=None)
    bench.add_argument("--workers", type=int, default=1)
    bench.add_argument("--out", help="directory for bench.json, instances.csv, summary.csv")
    bench.add_argument("--verbose", action="store_true")
    bench.set_defaults(func=cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (GraphFormatError, OracleTooLarge, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
