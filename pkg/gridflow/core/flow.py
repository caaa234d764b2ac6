"""
Flow assignments, feasibility checks and cost evaluation.
"""

from __future__ import annotations

import logging
import threading
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Any, Mapping, Optional, Union

import networkx as nx

from ..errors import InfeasibleFlow, UnknownArc
from .costs import Number
from .grid import Arc, GridSpec, Vertex, as_arc, is_finite

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class FlowAssignment:
    """Arc flows on a grid; arcs not listed carry zero flow.

    Values are stored as exact integers whenever they are integral.
    """

    flow: Mapping[Arc, Number]

    @classmethod
    def from_mapping(cls, grid: GridSpec, mapping: Mapping[Any, Number]) -> "FlowAssignment":
        values: dict[Arc, Number] = {arc: 0 for arc in grid.arcs()}
        for key, value in mapping.items():
            arc = as_arc(key)
            if not grid.has_arc(arc):
                raise UnknownArc(arc)
            if isinstance(value, float) and value.is_integer():
                value = int(value)
            values[arc] = value
        return cls(MappingProxyType(values))

    @classmethod
    def zero(cls, grid: GridSpec) -> "FlowAssignment":
        return cls(MappingProxyType({arc: 0 for arc in grid.arcs()}))

    def __getitem__(self, arc: Arc) -> Number:
        return self.flow.get(arc, 0)

    def value(self, arc: Any) -> Number:
        return self.flow.get(as_arc(arc), 0)

    def items(self):
        return self.flow.items()

    def as_vector(self, grid: GridSpec) -> tuple[Number, ...]:
        """Flow values in the grid's arc order, used for exact deduplication."""
        return tuple(self.flow.get(arc, 0) for arc in grid.arcs())

    def positive_arcs(self) -> list[Arc]:
        return [arc for arc, value in self.flow.items() if value > 0]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FlowAssignment):
            return NotImplemented
        keys = set(self.flow) | set(other.flow)
        return all(self[k] == other[k] for k in keys)

    def __hash__(self) -> int:
        return hash(frozenset((k, v) for k, v in self.flow.items() if v != 0))

    def __repr__(self) -> str:
        shown = ", ".join(f"{arc}:{value}" for arc, value in sorted(self.flow.items()) if value)
        return f"FlowAssignment({{{shown}}})"


@dataclass(frozen=True)
class Violation:
    """One failed constraint: a vertex balance or an arc bound."""

    kind: str  # "balance" | "bound"
    where: Union[Arc, Vertex]
    expected: Any
    actual: Any

    def __str__(self) -> str:
        if self.kind == "balance":
            l, t = self.where  # type: ignore[misc]
            return f"balance at v{l},{t}: expected net outflow {self.expected}, got {self.actual}"
        return f"bound on {self.where}: flow {self.actual} outside {self.expected}"


@dataclass(frozen=True)
class FlowCheck:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


def check_flow(grid: GridSpec, flow: FlowAssignment) -> FlowCheck:
    """List every violated balance equation and arc bound (empty when feasible)."""
    violations: list[Violation] = []
    net: dict[Vertex, Number] = {v: 0 for v in grid.vertices()}
    for arc in grid.arcs():
        x = flow[arc]
        cap = grid.capacity(arc)
        if x < 0 or (is_finite(cap) and x > cap):
            bound = f"[0, {cap}]" if is_finite(cap) else "[0, inf)"
            violations.append(Violation("bound", arc, bound, x))
        net[arc.tail] += x
        net[arc.head] -= x
    for (l, t), outflow in net.items():
        if outflow != grid.b(l, t):
            violations.append(Violation("balance", (l, t), grid.b(l, t), outflow))
    return FlowCheck(tuple(violations))


@dataclass
class CostLedger:
    """Counts cost-oracle queries; safe to share between pricing threads."""

    queries: int = 0
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False, compare=False)

    def charge(self, grid: GridSpec, arc: Arc, x: Number) -> Number:
        with self._lock:
            self.queries += 1
        return grid.cost(arc)(x)

    def add(self, count: int) -> None:
        with self._lock:
            self.queries += count


def evaluate_cost(grid: GridSpec, flow: FlowAssignment, ledger: Optional[CostLedger] = None) -> Number:
    """Total cost of a feasible flow, one oracle query per arc.

    Raises:
        InfeasibleFlow: If the flow breaks a balance equation or an arc bound.
    """
    verdict = check_flow(grid, flow)
    if not verdict.ok:
        raise InfeasibleFlow(list(verdict.violations))
    ledger = ledger if ledger is not None else CostLedger()
    total: Number = 0
    for arc in grid.arcs():
        total += ledger.charge(grid, arc, flow[arc])
    return total


# ==================== Feasibility ====================

_SOURCE = "__source__"
_SINK = "__sink__"


def transshipment_network(grid: GridSpec) -> nx.DiGraph:
    """Grid arcs plus a super source and super sink; unbounded arcs carry no capacity attribute."""
    graph = nx.DiGraph()
    graph.add_node(_SOURCE)
    graph.add_node(_SINK)
    graph.add_nodes_from(grid.vertices())
    for arc in grid.arcs():
        cap = grid.capacity(arc)
        if is_finite(cap):
            graph.add_edge(arc.tail, arc.head, capacity=cap)
        else:
            graph.add_edge(arc.tail, arc.head)
    for l, t in grid.vertices():
        b = grid.b(l, t)
        if b > 0:
            graph.add_edge(_SOURCE, (l, t), capacity=b)
        elif b < 0:
            graph.add_edge((l, t), _SINK, capacity=-b)
    return graph


def max_flow_value(grid: GridSpec) -> int:
    if grid.total_supply == 0:
        return 0
    value = nx.maximum_flow_value(transshipment_network(grid), _SOURCE, _SINK)
    return int(round(value))


def check_instance_feasible(grid: GridSpec) -> bool:
    """True iff some flow satisfies every balance equation and bound."""
    value = max_flow_value(grid)
    logger.debug("Max flow %d against total supply %d", value, grid.total_supply)
    return value == grid.total_supply
