"""
Brute-force extreme-point enumeration, the reference every solver result is
checked against at desk scale.

An extreme point is a feasible flow whose free arcs (0 < x < U) form no
undirected cycle. Each one arises from a spanning tree with every nontree arc
held at a bound, so we enumerate trees, try every bound assignment and solve
the tree arcs by flow balance.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Optional

from ..config import SolverSettings, resolve_settings
from ..core.costs import Number
from ..core.flow import CostLedger, FlowAssignment, check_flow, evaluate_cost
from ..core.grid import UNBOUNDED, Arc, GridSpec, Vertex, is_finite
from ..errors import InfeasibleFlow, InfeasibleInstance, TooLarge
from .trees import count_spanning_trees, enumerate_spanning_trees, has_cycle

logger = logging.getLogger(__name__)


def free_arcs(grid: GridSpec, flow: FlowAssignment) -> list[Arc]:
    result = []
    for arc in grid.arcs():
        x = flow[arc]
        cap = grid.capacity(arc)
        if x > 0 and (cap is UNBOUNDED or x < cap):
            result.append(arc)
    return result


def is_cycle_free(grid: GridSpec, flow: FlowAssignment) -> bool:
    """True iff the free arcs of a feasible flow contain no undirected cycle.

    Raises:
        InfeasibleFlow: If the flow is not feasible.
    """
    verdict = check_flow(grid, flow)
    if not verdict.ok:
        raise InfeasibleFlow(list(verdict.violations))
    return not has_cycle(free_arcs(grid, flow))


def solve_tree_flows(
    grid: GridSpec,
    tree: frozenset[Arc],
    fixed: dict[Arc, Number],
) -> Optional[dict[Arc, Number]]:
    """Solve the tree arc flows given the nontree arc flows.

    Leaves are peeled one at a time: a leaf's only tree arc must carry the
    leaf's remaining net outflow. Returns None when a tree arc leaves its bounds.
    """
    residual: dict[Vertex, Number] = {v: grid.b(*v) for v in grid.vertices()}
    for arc, x in fixed.items():
        if x:
            residual[arc.tail] -= x
            residual[arc.head] += x

    incident: dict[Vertex, list[Arc]] = {v: [] for v in residual}
    for arc in tree:
        incident[arc.tail].append(arc)
        incident[arc.head].append(arc)
    degree = {v: len(arcs) for v, arcs in incident.items()}
    done: set[Arc] = set()
    stack = [v for v, d in degree.items() if d == 1]
    flows: dict[Arc, Number] = dict(fixed)

    while stack:
        v = stack.pop()
        if degree[v] != 1:
            continue
        arc = next(a for a in incident[v] if a not in done)
        if arc.tail == v:
            x = residual[v]
            other = arc.head
            residual[other] += x
        else:
            x = -residual[v]
            other = arc.tail
            residual[other] -= x
        residual[v] = 0
        cap = grid.capacity(arc)
        if x < 0 or (is_finite(cap) and x > cap):
            return None
        flows[arc] = x
        done.add(arc)
        degree[v] -= 1
        degree[other] -= 1
        if degree[other] == 1:
            stack.append(other)
    return flows


def enumerate_extreme_points(
    grid: GridSpec,
    settings: Optional[SolverSettings] = None,
) -> list[FlowAssignment]:
    """All extreme points of the flow polyhedron, deduplicated and sorted by flow vector.

    Unbounded nontree arcs are held at 0 only.

    Raises:
        TooLarge: If the grid or the tree/bound combination count exceeds the budget.
    """
    settings = resolve_settings(settings)
    n = grid.L * grid.T
    if n > settings.oracle_max_vertices:
        raise TooLarge(f"{grid.L}x{grid.T} grid exceeds the oracle limit of {settings.oracle_max_vertices} vertices")
    tree_count = count_spanning_trees(grid.L, grid.T)
    if tree_count > settings.oracle_max_combinations:
        raise TooLarge(f"{tree_count} spanning trees exceed the oracle budget of {settings.oracle_max_combinations}")

    arcs = grid.arcs()
    seen: dict[tuple[Number, ...], FlowAssignment] = {}
    combinations = 0
    for tree in enumerate_spanning_trees(grid.L, grid.T, arcs):
        bounded = [a for a in arcs if a not in tree and is_finite(grid.capacity(a))]
        combinations += 2 ** len(bounded)
        if combinations > settings.oracle_max_combinations:
            raise TooLarge(f"more than {settings.oracle_max_combinations} tree/bound combinations")
        for choice in itertools.product((False, True), repeat=len(bounded)):
            fixed = {a: (grid.capacity(a) if at_cap else 0) for a, at_cap in zip(bounded, choice)}
            flows = solve_tree_flows(grid, tree, fixed)
            if flows is None:
                continue
            vector = tuple(flows.get(a, 0) for a in arcs)
            if vector not in seen:
                seen[vector] = FlowAssignment.from_mapping(grid, flows)

    logger.debug("Oracle: %d trees, %d combinations, %d extreme points", tree_count, combinations, len(seen))
    return [seen[key] for key in sorted(seen)]


@dataclass(frozen=True)
class OracleResult:
    flow: FlowAssignment
    cost: Number
    extreme_points: int
    oracle_queries: int


def brute_force_minimum(grid: GridSpec, settings: Optional[SolverSettings] = None) -> OracleResult:
    """Cheapest extreme point; the first one in enumeration order wins ties.

    Raises:
        InfeasibleInstance: If no extreme point exists.
        TooLarge: If the instance is beyond the oracle budget.
    """
    settings = resolve_settings(settings)
    points = enumerate_extreme_points(grid, settings)
    if not points:
        raise InfeasibleInstance("No feasible flow exists")
    ledger = CostLedger()
    best: Optional[FlowAssignment] = None
    best_cost: Number = 0
    for point in points:
        cost = evaluate_cost(grid, point, ledger)
        if best is None or cost < best_cost - settings.tolerance:
            best, best_cost = point, cost
    return OracleResult(best, best_cost, len(points), ledger.queries)
