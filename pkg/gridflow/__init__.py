"""
gridflow - minimum concave cost flows on grid graphs

Contains:
- Instance model (grids, concave cost oracles, flows, file formats)
- Extreme-point tools (brute-force oracle, accessible spanning trees)
- Candidate-value enumerators and the state-graph solver
- Lot-sizing adapters and hardness constructions
"""

from .config import SolverSettings
from .core import FlowAssignment, GridSpec, build_grid, check_flow, evaluate_cost, load_instance
from .errors import GridFlowError
from .solver import SolveResult, solve

__all__ = [
    "FlowAssignment",
    "GridFlowError",
    "GridSpec",
    "SolveResult",
    "SolverSettings",
    "build_grid",
    "check_flow",
    "evaluate_cost",
    "load_instance",
    "solve",
]
