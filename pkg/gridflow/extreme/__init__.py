"""
Extreme points of the grid flow polyhedron: brute-force enumeration and the
row-one accessible spanning trees used to reason about them.
"""

from .accessible import (
    KappaTable,
    SpanningTreeSolution,
    VertexType,
    VertexTypeMap,
    accessible_tree_for,
    build_accessible_spanning_tree,
    check_structural_lemmas,
    classify_vertices,
    compute_kappa,
    flow_via_tree_cut,
    maximal_intervals,
    spanning_tree_solution,
)
from .oracle import OracleResult, brute_force_minimum, enumerate_extreme_points, free_arcs, is_cycle_free
from .trees import count_spanning_trees, enumerate_spanning_trees

__all__ = [
    "KappaTable",
    "OracleResult",
    "SpanningTreeSolution",
    "VertexType",
    "VertexTypeMap",
    "accessible_tree_for",
    "brute_force_minimum",
    "build_accessible_spanning_tree",
    "check_structural_lemmas",
    "classify_vertices",
    "compute_kappa",
    "count_spanning_trees",
    "enumerate_extreme_points",
    "enumerate_spanning_trees",
    "flow_via_tree_cut",
    "free_arcs",
    "is_cycle_free",
    "maximal_intervals",
    "spanning_tree_solution",
]
