"""Optimal almost-instantaneous variable-to-fixed source coding.

The package builds the multi-tree parse dictionaries that let a
variable-to-fixed encoder reuse codewords across a small family of parse
trees, computes the exactly optimal family for a memoryless source, and
ships the matching encoder and decoder. All probability arithmetic is
exact rational arithmetic.
"""

from .codec import CodeSystem, decode, encode, load_code_system, parse_words, save_code_system
from .errors import CodingError
from .global_solver import (
    BoundingBox,
    SolverResult,
    bounding_box,
    brute_force_optimum,
    count_trees,
    enumerate_trees,
    min_envelope,
    solve_cutting_plane,
    solve_iterative,
    type_envelope,
)
from .local_dp import DpTables, dp_costs_only, dp_optimize, restricted_base_trees, tree_cost
from .markov import (
    Chain,
    Hyperplane,
    IntersectionPoint,
    global_parse_length,
    multityped_intersection,
    state_hyperplane,
    stationary,
    transition_matrix,
)
from .parse_tree import (
    DictEntry,
    ParseTree,
    TreeNode,
    expected_parse_length,
    occurrence_probs,
    tie,
    tie_last,
    transition_probs,
    validate_tree,
)
from .source_model import SourceModel, load_probability_file
from .tunstall import Rate, TunstallCode, build_tunstall, coding_rate

__version__ = "0.1.0"

__all__ = [
    "BoundingBox",
    "Chain",
    "CodeSystem",
    "CodingError",
    "DictEntry",
    "DpTables",
    "Hyperplane",
    "IntersectionPoint",
    "ParseTree",
    "Rate",
    "SolverResult",
    "SourceModel",
    "TreeNode",
    "TunstallCode",
    "bounding_box",
    "brute_force_optimum",
    "build_tunstall",
    "coding_rate",
    "count_trees",
    "decode",
    "dp_costs_only",
    "dp_optimize",
    "encode",
    "enumerate_trees",
    "expected_parse_length",
    "global_parse_length",
    "load_code_system",
    "load_probability_file",
    "min_envelope",
    "multityped_intersection",
    "occurrence_probs",
    "parse_words",
    "restricted_base_trees",
    "save_code_system",
    "solve_cutting_plane",
    "solve_iterative",
    "state_hyperplane",
    "stationary",
    "tie",
    "tie_last",
    "transition_matrix",
    "transition_probs",
    "tree_cost",
    "type_envelope",
    "validate_tree",
]
