"""
Layered state-graph dynamic program over candidate forward flows.
"""

from .pipeline import SolvePipeline, SolveResult, solve
from .state_graph import (
    ShortestPath,
    StateGraph,
    Transition,
    build_state_graph,
    flow_states,
    recover_flow,
    replay_flow,
    shortest_path,
    stage_states,
    transition,
)

__all__ = [
    "ShortestPath",
    "SolvePipeline",
    "SolveResult",
    "StateGraph",
    "Transition",
    "build_state_graph",
    "flow_states",
    "recover_flow",
    "replay_flow",
    "shortest_path",
    "solve",
    "stage_states",
    "transition",
]
