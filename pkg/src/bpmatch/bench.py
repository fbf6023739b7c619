"""Random-instance benchmark: CP-BP success, base-LP tightness, CP-LP success."""

from __future__ import annotations

import csv
import io
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

from .bp import DEFAULT_ITERATIONS
from .cutting_plane import cp_bp, cp_lp
from .graph import generate_instance
from .lp import check_tight_unique
from .oracle import reference_optimum

W_MAX = 1 << 20


@dataclass(frozen=True)
class BenchConfig:
    n: int
    p: float
    count: int = 100
    seed: int = 0
    w_max: int = W_MAX
    iterations: int = DEFAULT_ITERATIONS
    max_rounds: int | None = None

    def __post_init__(self):
        if self.n < 1 or self.count < 1 or self.w_max < 1 or self.iterations < 2:
            raise ValueError("benchmark parameters must be positive")
        if not 0 <= self.p <= 1:
            raise ValueError("p must lie in [0, 1]")

    def instance_seed(self, i: int) -> int:
        return self.seed + i


@dataclass(frozen=True)
class InstanceRow:
    n: int
    p: float
    seed: int
    edges: int
    optimum: int
    tight: bool
    # base LP optimum not unique: reported, never silently counted as tight
    lp_non_unique: bool
    cp_bp_status: str
    cp_bp_weight: int | None
    cp_bp_cycles: int
    cp_bp_solved: bool
    cp_lp_status: str
    cp_lp_weight: int | None
    cp_lp_cycles: int
    cp_lp_solved: bool
    seconds: float


def run_instance(cfg: BenchConfig, i: int) -> InstanceRow:
    start = time.perf_counter()
    seed = cfg.instance_seed(i)
    g = generate_instance(cfg.n, cfg.p, cfg.w_max, seed)
    opt = reference_optimum(g)
    tight = check_tight_unique(g)
    bp = cp_bp(g, cfg.iterations, cfg.max_rounds)
    lp = cp_lp(g, cfg.max_rounds)
    return InstanceRow(
        n=cfg.n, p=cfg.p, seed=seed, edges=g.edge_count, optimum=opt,
        tight=tight.tight, lp_non_unique=not tight.unique,
        cp_bp_status=bp.status.value, cp_bp_weight=bp.weight, cp_bp_cycles=bp.cycles_added,
        cp_bp_solved=bp.solved and bp.weight == opt,
        cp_lp_status=lp.status.value, cp_lp_weight=lp.weight, cp_lp_cycles=lp.cycles_added,
        cp_lp_solved=lp.solved and lp.weight == opt,
        seconds=time.perf_counter() - start,
    )


def _run_packed(args):
    return run_instance(*args)


@dataclass
class BenchSummary:
    n: int
    p: float
    count: int
    mean_edges: float
    cp_bp_pct: float
    tight_pct: float
    cp_lp_pct: float
    lp_non_unique: int
    seconds: float


@dataclass
class BenchReport:
    rows: list[InstanceRow] = field(default_factory=list)

    def summaries(self) -> list[BenchSummary]:
        groups: dict[tuple[int, float], list[InstanceRow]] = {}
        for r in self.rows:
            groups.setdefault((r.n, r.p), []).append(r)
        out = []
        for (n, p), rows in sorted(groups.items()):
            k = len(rows)
            pct = lambda xs: 100.0 * sum(xs) / k
            out.append(BenchSummary(
                n=n, p=p, count=k,
                mean_edges=sum(r.edges for r in rows) / k,
                cp_bp_pct=pct(r.cp_bp_solved for r in rows),
                tight_pct=pct(r.tight for r in rows),
                cp_lp_pct=pct(r.cp_lp_solved for r in rows),
                lp_non_unique=sum(r.lp_non_unique for r in rows),
                seconds=sum(r.seconds for r in rows),
            ))
        return out

    def to_json(self) -> str:
        return json.dumps({
            "summary": [asdict(s) for s in self.summaries()],
            "instances": [asdict(r) for r in self.rows],
        }, indent=2)

    def rows_csv(self) -> str:
        return _csv([asdict(r) for r in self.rows], list(InstanceRow.__dataclass_fields__))

    def summary_csv(self) -> str:
        return _csv([asdict(s) for s in self.summaries()], list(BenchSummary.__dataclass_fields__))

    def table(self) -> str:
        lines = [f"{'|V|':>4} {'p':>5} {'|E|':>8} {'CP-BP':>7} {'tight':>7} {'CP-LP':>7} {'flagged':>8}"]
        for s in self.summaries():
            lines.append(f"{s.n:>4} {s.p:>5.2f} {s.mean_edges:>8.1f} {s.cp_bp_pct:>6.1f}% "
                         f"{s.tight_pct:>6.1f}% {s.cp_lp_pct:>6.1f}% {s.lp_non_unique:>8}")
        return "\n".join(lines)


def _csv(records: list[dict], header: list[str]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=header, lineterminator="\n")
    w.writeheader()
    w.writerows(records)
    return buf.getvalue()


def run_bench(configs: list[BenchConfig], workers: int = 1, progress=None) -> BenchReport:
    """Rows come back in (config, instance) order whatever the worker count."""
    jobs = [(cfg, i) for cfg in configs for i in range(cfg.count)]
    if workers <= 1:
        rows = []
        for job in jobs:
            rows.append(run_instance(*job))
            if progress is not None:
                progress(rows[-1])
        return BenchReport(rows)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        rows = []
        for row in pool.map(_run_packed, jobs):
            rows.append(row)
            if progress is not None:
                progress(row)
    return BenchReport(rows)
