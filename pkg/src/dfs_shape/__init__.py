"""Shape of the depth-first search contour on sparse Erdos-Renyi graphs."""

from .dfs import DfsTrace, SpanningTree, find_giant_run, run_dfs
from .graphs import GraphSpec, SparseGraph, component_census, sample_graph
from .harness import ExperimentConfig, RunSummary, run_experiment
from .numeric import LimitCurve, dilog, eval_height, limit_curve, solve_survival
from .trajectory import detect_renewals, pinning_heights, sup_distance

__all__ = [
    "DfsTrace",
    "ExperimentConfig",
    "GraphSpec",
    "LimitCurve",
    "RunSummary",
    "SparseGraph",
    "SpanningTree",
    "component_census",
    "detect_renewals",
    "dilog",
    "eval_height",
    "find_giant_run",
    "limit_curve",
    "pinning_heights",
    "run_dfs",
    "run_experiment",
    "sample_graph",
    "solve_survival",
    "sup_distance",
]
