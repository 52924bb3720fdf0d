"""Exact and approximate solvers for safe sets and connected safe sets."""

from .branching import branch_solve, steiner_exact
from .cexpr import CExpression, cycle_expression, eval_graph, parse_cexpression
from .cw import solve_cw
from .graph import (
    Graph,
    InputError,
    PathDecomposition,
    components,
    is_connected_safe_set,
    is_safe_set,
    validate_path_decomposition,
)
from .nd import solve_nd
from .oracle import SolveResult, connected_safe_number_bf, safe_number_bf
from .preprocess import approx_safe_set

__all__ = [
    "CExpression",
    "Graph",
    "InputError",
    "PathDecomposition",
    "SolveResult",
    "approx_safe_set",
    "branch_solve",
    "components",
    "connected_safe_number_bf",
    "cycle_expression",
    "eval_graph",
    "is_connected_safe_set",
    "is_safe_set",
    "parse_cexpression",
    "safe_number_bf",
    "solve_cw",
    "solve_nd",
    "steiner_exact",
    "validate_path_decomposition",
]
