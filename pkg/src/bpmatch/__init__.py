"""Max-product belief propagation with odd-cycle cutting planes for maximum
weight matching, with an exact rational LP for cross-checking."""

from .bp import BPResult, FactorGraph, build_baseline_factor_graph, build_factor_graph, run_bp
from .cutting_plane import CPOutcome, Status, classify_instance, cp_bp, cp_lp
from .graph import (
    HALF,
    OddCycle,
    OddCycleSet,
    WeightedGraph,
    find_odd_cycle,
    generate_instance,
    parse_cycles,
    parse_graph,
    validate_matching,
)
from .lp import build_clp, build_clp_prime, check_tight_unique, solve
from .transform import TransformedModel, build_transform, lift_x_to_y, project_y_to_x

__all__ = [
    "BPResult", "FactorGraph", "build_baseline_factor_graph", "build_factor_graph", "run_bp",
    "CPOutcome", "Status", "classify_instance", "cp_bp", "cp_lp",
    "HALF", "OddCycle", "OddCycleSet", "WeightedGraph", "find_odd_cycle", "generate_instance",
    "parse_cycles", "parse_graph", "validate_matching",
    "build_clp", "build_clp_prime", "check_tight_unique", "solve",
    "TransformedModel", "build_transform", "lift_x_to_y", "project_y_to_x",
]
