"""Random-instance benchmark over |V| and sparsity, written to results/.

    python scripts/run_benchmark.py                 # n=50, p in {0.5, 0.9}, 100 each
    python scripts/run_benchmark.py --n 50 100 --workers 4
"""

import argparse
import sys
from pathlib import Path

from bpmatch.bench import BenchConfig, run_bench

REFERENCE = {(50, 0.5): (94, 65, 98), (50, 0.9): (90, 59, 91),
             (100, 0.5): (92, 48, 95), (100, 0.9): (63, 50, 63)}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, nargs="+", default=[50])
    ap.add_argument("--p", type=float, nargs="+", default=[0.5, 0.9])
    ap.add_argument("--count", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--iterations", type=int, default=1000)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", default="results/benchmark")
    args = ap.parse_args()

    configs = [BenchConfig(n, p, args.count, args.seed, iterations=args.iterations)
               for n in args.n for p in args.p]
    done = [0]
    total = sum(c.count for c in configs)

    def progress(row):
        done[0] += 1
        print(f"\r{done[0]}/{total}", end="", file=sys.stderr, flush=True)

    report = run_bench(configs, args.workers, progress)
    print(file=sys.stderr)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "bench.json").write_text(report.to_json() + "\n")
    (out / "instances.csv").write_text(report.rows_csv())
    (out / "summary.csv").write_text(report.summary_csv())

    print(report.table())
    print("\nreference (CP-BP / tight / CP-LP), tolerance +-10 points:")
    for s in report.summaries():
        ref = REFERENCE.get((s.n, round(s.p, 2)))
        if ref is None:
            continue
        got = (s.cp_bp_pct, s.tight_pct, s.cp_lp_pct)
        ok = all(abs(g - r) <= 10 for g, r in zip(got, ref))
        print(f"  n={s.n} p={s.p}: {'/'.join(f'{g:.0f}' for g in got)} vs "
              f"{'/'.join(map(str, ref))}  {'ok' if ok else 'OUT OF TOLERANCE'}")


if __name__ == "__main__":
    main()
