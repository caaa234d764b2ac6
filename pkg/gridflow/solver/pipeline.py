"""
End-to-end solve: classify, enumerate candidates, build the state graph,
take its shortest path and recover the flow.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional

from ..candidates.factory import create_enumerator
from ..config import SolverSettings, resolve_settings
from ..core.classify import CaseTag, InstanceCase, classify_instance
from ..core.costs import Number
from ..core.flow import FlowAssignment, check_instance_feasible, evaluate_cost
from ..core.grid import GridSpec
from ..errors import InfeasibleInstance, InternalInconsistency, TooLarge, Unsupported
from ..extreme.oracle import brute_force_minimum
from .state_graph import build_state_graph, recover_flow, shortest_path

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SolveResult:
    flow: FlowAssignment
    cost: Number
    case: InstanceCase
    counts: dict[str, object] = field(default_factory=dict)

    @property
    def tag(self) -> CaseTag:
        return self.case.tag

    def __iter__(self):
        yield self.flow
        yield self.cost
        yield self.case.tag


class SolvePipeline:
    def __init__(self, grid: GridSpec, settings: Optional[SolverSettings] = None):
        self.grid = grid
        self.settings = resolve_settings(settings)

    def run(self) -> SolveResult:
        """
        Solve the instance to optimality.

        Returns:
            SolveResult with the optimal flow, its cost, the case used and
            the work counts (states per stage, arcs, oracle queries).

        Raises:
            InfeasibleInstance: No feasible flow exists.
            Unsupported: No polynomial case applies and brute force is out of budget.
        """
        grid = self.grid

        # Step 1: feasibility and case
        if not check_instance_feasible(grid):
            raise InfeasibleInstance(f"No feasible flow for {grid!r}")
        case = classify_instance(grid)
        if not case.is_polynomial:
            return self._brute_force(case)

        # Step 2: candidate values -> state graph
        candidates = create_enumerator(case).generate(grid)
        graph = build_state_graph(grid, candidates, self.settings)

        # Step 3: shortest path -> flow, re-priced as a consistency check
        path = shortest_path(graph, self.settings.tolerance)
        flow = recover_flow(grid, path)
        cost = evaluate_cost(grid, flow)
        if abs(cost - path.cost) > self.settings.tolerance * max(1.0, abs(cost)):
            raise InternalInconsistency(f"Path cost {path.cost} differs from flow cost {cost}")

        logger.info("Solved %s: cost %s, %d state-graph arcs", case.label, path.cost, graph.arc_count())
        counts = {
            "candidate_values": candidates.size(),
            "states_per_stage": graph.state_counts(),
            "state_graph_arcs": graph.arc_count(),
            "oracle_queries": graph.oracle_queries,
        }
        return SolveResult(flow, path.cost, case, counts)

    def _brute_force(self, case: InstanceCase) -> SolveResult:
        logger.warning("No polynomial case for %r; falling back to extreme-point enumeration", self.grid)
        try:
            best = brute_force_minimum(self.grid, self.settings)
        except TooLarge as exc:
            raise Unsupported(f"{case.label} instance is too large for brute force: {exc}") from exc
        counts = {"extreme_points": best.extreme_points, "oracle_queries": best.oracle_queries}
        return SolveResult(best.flow, best.cost, InstanceCase(CaseTag.BRUTE_FORCE, k=case.k), counts)


def solve(grid: GridSpec, settings: Optional[SolverSettings] = None) -> SolveResult:
    return SolvePipeline(grid, settings).run()
