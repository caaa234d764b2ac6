"""
The (T+1)-stage state graph and its shortest path.

A state at stage t (1 <= t <= T-1) is the vector of forward flows leaving
column t, one entry per row; stages 0 and T hold only the zero vector. Moving
from stage t to t+1 fixes the downward flows of column t+1 by flow balance,
so each transition has a unique downward vector and a cost.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

from ..candidates.base import CandidateValueSet
from ..config import SolverSettings, resolve_settings
from ..core.costs import Number
from ..core.flow import CostLedger, FlowAssignment, check_flow
from ..core.grid import GridSpec, within_capacity
from ..errors import CaseMismatch, EmptyStage, InternalInconsistency, NoPath

logger = logging.getLogger(__name__)

State = tuple[int, ...]


@dataclass(frozen=True)
class Transition:
    source: State
    target: State
    u: tuple[int, ...]
    cost: Number


@dataclass
class StateGraph:
    grid: GridSpec
    stages: list[tuple[State, ...]]
    arcs: list[dict[State, list[Transition]]]
    ledger: CostLedger = field(default_factory=CostLedger)

    def state_counts(self) -> list[int]:
        return [len(states) for states in self.stages]

    def arc_count(self) -> int:
        return sum(len(out) for layer in self.arcs for out in layer.values())

    @property
    def oracle_queries(self) -> int:
        return self.ledger.queries

    def outgoing(self, t: int, state: State) -> list[Transition]:
        return self.arcs[t].get(state, [])


def transition(
    grid: GridSpec,
    t: int,
    s_prev: Sequence[int],
    s_next: Sequence[int],
    ledger: Optional[CostLedger] = None,
) -> Optional[Transition]:
    """Price the move from state ``s_prev`` at stage t to ``s_next`` at stage t+1.

    Downward flows of column t+1 follow from balance row by row; the last row
    must balance exactly. Forward costs of ``s_prev`` are charged here, none at
    stage 0. Returns None when the move is infeasible or its cost is not finite.
    """
    L = grid.L
    c = t + 1
    if t >= 1:
        for l in range(1, L + 1):
            if not within_capacity(s_prev[l - 1], grid.capacity(grid.forward_arc(l, t))):
                return None
    if t + 1 <= grid.T - 1:
        for l in range(1, L + 1):
            if not within_capacity(s_next[l - 1], grid.capacity(grid.forward_arc(l, c))):
                return None

    u: list[int] = []
    carry = 0
    for l in range(1, L):
        value = s_prev[l - 1] + carry + grid.b(l, c) - s_next[l - 1]
        if value < 0 or not within_capacity(value, grid.capacity(grid.down_arc(l, c))):
            return None
        u.append(value)
        carry = value
    if s_prev[L - 1] + carry + grid.b(L, c) - s_next[L - 1] != 0:
        return None

    ledger = ledger if ledger is not None else CostLedger()
    cost: Number = 0
    if t >= 1:
        for l in range(1, L + 1):
            cost += ledger.charge(grid, grid.forward_arc(l, t), s_prev[l - 1])
    for l in range(1, L):
        cost += ledger.charge(grid, grid.down_arc(l, c), u[l - 1])
    if not math.isfinite(cost):
        return None
    return Transition(tuple(s_prev), tuple(s_next), tuple(u), cost)


def stage_states(grid: GridSpec, t: int, candidates: CandidateValueSet) -> list[State]:
    """Candidate vectors for stage t that respect capacities and the column sums.

    The forward flows leaving rows 1..l after column t can carry at most the
    supply of the block ``rows <= l, columns <= t``; for l = L this holds with
    equality.
    """
    L = grid.L
    supplies = grid.supply_array()
    block = supplies[:, :t].sum(axis=1).cumsum()
    limits = [int(v) for v in block]
    options = []
    for l in range(1, L + 1):
        cap = grid.capacity(grid.forward_arc(l, t))
        options.append([v for v in candidates.values_for_row(l) if within_capacity(v, cap)])

    states: list[State] = []

    def extend(prefix: list[int], running: int) -> None:
        l = len(prefix)
        if l == L:
            if running == limits[-1]:
                states.append(tuple(prefix))
            return
        for v in options[l]:
            total = running + v
            if total > limits[l]:
                break
            prefix.append(v)
            extend(prefix, total)
            prefix.pop()

    extend([], 0)
    return states


def build_state_graph(
    grid: GridSpec,
    candidates: CandidateValueSet,
    settings: Optional[SolverSettings] = None,
) -> StateGraph:
    """Build the layered state graph over candidate states.

    Only states reachable from stage 0 are expanded. Transitions are priced on
    ``settings.threads`` worker threads; the merge order does not depend on it.

    Raises:
        CaseMismatch: The candidate set does not match the grid.
        EmptyStage: A stage keeps no candidate state.
    """
    settings = resolve_settings(settings)
    if len(candidates.rows) != grid.L:
        raise CaseMismatch(f"Candidate set has {len(candidates.rows)} rows, grid has {grid.L}")

    zero: State = (0,) * grid.L
    stages: list[tuple[State, ...]] = [(zero,)]
    for t in range(1, grid.T):
        states = stage_states(grid, t, candidates)
        if not states:
            raise EmptyStage(t)
        stages.append(tuple(states))
    stages.append((zero,))

    ledger = CostLedger()
    layers: list[dict[State, list[Transition]]] = []
    reached = {zero}
    with ThreadPoolExecutor(max_workers=settings.threads) as pool:
        for t in range(grid.T):
            sources = [s for s in stages[t] if s in reached]
            targets = stages[t + 1]

            def price(s_prev: State, t: int = t, targets: tuple[State, ...] = targets) -> list[Transition]:
                found = []
                for s_next in targets:
                    move = transition(grid, t, s_prev, s_next, ledger)
                    if move is not None:
                        found.append(move)
                return found

            if settings.threads > 1:
                priced = list(pool.map(price, sources))
            else:
                priced = [price(s) for s in sources]
            layer = {s: moves for s, moves in zip(sources, priced) if moves}
            layers.append(layer)
            reached = {move.target for moves in layer.values() for move in moves}

    graph = StateGraph(grid, stages, layers, ledger)
    logger.debug(
        "State graph: states per stage %s, %d arcs, %d oracle queries",
        graph.state_counts(),
        graph.arc_count(),
        ledger.queries,
    )
    return graph


@dataclass(frozen=True)
class ShortestPath:
    states: tuple[State, ...]
    transitions: tuple[Transition, ...]
    cost: Number


def shortest_path(graph: StateGraph, tolerance: float = 1e-9) -> ShortestPath:
    """Cheapest path from the stage-0 zero state to the stage-T zero state.

    Costs-to-go are computed stage by stage backwards; the path is then walked
    forwards, taking the lexicographically smallest successor among those
    within ``tolerance`` of optimal.

    Raises:
        NoPath: If the sink state cannot be reached.
    """
    T = len(graph.stages) - 1
    zero = graph.stages[0][0]
    to_go: list[dict[State, Number]] = [dict() for _ in range(T + 1)]
    to_go[T][zero] = 0
    for t in range(T - 1, -1, -1):
        for state, moves in graph.arcs[t].items():
            best: Optional[Number] = None
            for move in moves:
                rest = to_go[t + 1].get(move.target)
                if rest is None:
                    continue
                value = move.cost + rest
                if best is None or value < best:
                    best = value
            if best is not None:
                to_go[t][state] = best
    if zero not in to_go[0]:
        raise NoPath("No path from the source state to the sink state")

    states = [zero]
    chosen: list[Transition] = []
    for t in range(T):
        here = states[-1]
        target_cost = to_go[t][here]
        options = [
            move
            for move in graph.outgoing(t, here)
            if move.target in to_go[t + 1] and move.cost + to_go[t + 1][move.target] <= target_cost + tolerance
        ]
        move = min(options, key=lambda m: m.target)
        chosen.append(move)
        states.append(move.target)

    total: Number = sum(move.cost for move in chosen)
    return ShortestPath(tuple(states), tuple(chosen), total)


def recover_flow(grid: GridSpec, path: ShortestPath | Sequence[State]) -> FlowAssignment:
    """Rebuild the arc flows from a state path.

    Raises:
        InternalInconsistency: If the path does not yield a feasible flow.
    """
    states = path.states if isinstance(path, ShortestPath) else tuple(tuple(s) for s in path)
    if len(states) != grid.T + 1:
        raise InternalInconsistency(f"Path has {len(states)} states, expected {grid.T + 1}")
    values = {}
    for t in range(grid.T):
        move = transition(grid, t, states[t], states[t + 1])
        if move is None:
            raise InternalInconsistency(f"Path step {t} -> {t + 1} is not a feasible transition")
        if t >= 1:
            for l in range(1, grid.L + 1):
                values[grid.forward_arc(l, t)] = states[t][l - 1]
        for l in range(1, grid.L):
            values[grid.down_arc(l, t + 1)] = move.u[l - 1]
    flow = FlowAssignment.from_mapping(grid, values)
    verdict = check_flow(grid, flow)
    if not verdict.ok:
        raise InternalInconsistency(f"Recovered flow is infeasible: {verdict.violations[0]}")
    return flow


def flow_states(grid: GridSpec, flow: FlowAssignment) -> tuple[State, ...]:
    """The state sequence a flow passes through."""
    zero: State = (0,) * grid.L
    middle = [
        tuple(int(flow[grid.forward_arc(l, t)]) for l in range(1, grid.L + 1)) for t in range(1, grid.T)
    ]
    return (zero, *middle, zero)


def replay_flow(graph: StateGraph, flow: FlowAssignment) -> Optional[Number]:
    """Length of the state-graph path matching ``flow``, or None if the path is missing."""
    states = flow_states(graph.grid, flow)
    total: Number = 0
    for t in range(len(states) - 1):
        move = next((m for m in graph.outgoing(t, states[t]) if m.target == states[t + 1]), None)
        if move is None:
            return None
        total += move.cost
    return total
