"""Hop-bounded maximum multicommodity flow toolkit.

Solvers (a (1-omega)-approximation scheme and a greedy heuristic), exact
small-instance oracle, LP model export, instance file I/O and a grid
benchmark generator. Hot shortest-path kernels run through a compiled
extension when available (``lbmcf.kernels.BACKEND`` names the backend in
use).
"""

from .fptas import FptasParams, FptasStats, derive_params, dual_upper_bound, solve
from .greedy import GreedyStats, solve_greedy
from .io import (
    parse_instance,
    parse_solution,
    read_instance,
    read_solution,
    serialize_instance,
    serialize_solution,
    write_instance,
    write_solution,
)
from .kernels import BACKEND
from .model import (
    REL_TOL,
    UNBOUNDED,
    Commodity,
    Edge,
    FlowSolution,
    Instance,
    Network,
    PathFlow,
    ValidationReport,
    aggregate_edge_flows,
    validate_solution,
)
from .oracle import exact_optimum
from .paths import hop_shortest_path_tree, prune_unreachable_pairs, truncated_bellman_ford

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "Commodity",
    "Edge",
    "FlowSolution",
    "FptasParams",
    "FptasStats",
    "GreedyStats",
    "Instance",
    "Network",
    "PathFlow",
    "REL_TOL",
    "UNBOUNDED",
    "ValidationReport",
    "aggregate_edge_flows",
    "derive_params",
    "dual_upper_bound",
    "exact_optimum",
    "hop_shortest_path_tree",
    "parse_instance",
    "parse_solution",
    "prune_unreachable_pairs",
    "read_instance",
    "read_solution",
    "serialize_instance",
    "serialize_solution",
    "solve",
    "solve_greedy",
    "truncated_bellman_ford",
    "validate_solution",
    "write_instance",
    "write_solution",
    "__version__",
]
