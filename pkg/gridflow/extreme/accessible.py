"""
Spanning tree solutions whose vertices are all reachable from row one.

For an extreme point of an uncapacitated instance with every source in row
one, ``build_accessible_spanning_tree`` completes the free arcs to a spanning
tree in which every vertex has a directed tree path starting in row one. On
such trees the row-one reach table (kappa) and the vertex types relative to a
deleted tree arc have the interval structure the candidate enumerators rely
on; ``check_structural_lemmas`` asserts all of it.
"""

from __future__ import annotations

import enum
import logging
from collections import deque
from dataclasses import dataclass
from typing import Hashable, Optional, Sequence

from ..core.costs import Number
from ..core.flow import FlowAssignment, check_flow
from ..core.grid import Arc, GridSpec, Vertex, strip_rows
from ..errors import InfeasibleFlow, NontreeArc, NotExtreme, PreconditionSources, PropertyViolated
from .oracle import free_arcs
from .trees import DisjointSet, has_cycle

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SpanningTreeSolution:
    flow: FlowAssignment
    tree_arcs: frozenset[Arc]
    free_arcs: frozenset[Arc]

    def nontree_arcs(self, grid: GridSpec) -> list[Arc]:
        return [a for a in grid.arcs() if a not in self.tree_arcs]


def _validated_free_arcs(grid: GridSpec, flow: FlowAssignment) -> list[Arc]:
    verdict = check_flow(grid, flow)
    if not verdict.ok:
        raise InfeasibleFlow(list(verdict.violations))
    free = free_arcs(grid, flow)
    if has_cycle(free):
        raise NotExtreme("Free arcs of the flow contain an undirected cycle")
    return free


def spanning_tree_solution(grid: GridSpec, flow: FlowAssignment) -> SpanningTreeSolution:
    """Complete the free arcs to some spanning tree, adding arcs in row-major order."""
    free = _validated_free_arcs(grid, flow)
    dsu = DisjointSet(grid.vertices())
    tree = []
    for arc in free:
        dsu.union(arc.tail, arc.head)
        tree.append(arc)
    for arc in grid.arcs():
        if dsu.components == 1:
            break
        if arc not in tree and dsu.union(arc.tail, arc.head):
            tree.append(arc)
    return SpanningTreeSolution(flow, frozenset(tree), frozenset(free))


def _accessible_vertices(grid: GridSpec, tree: set[Arc], touched: set[Vertex]) -> set[Vertex]:
    out: dict[Vertex, list[Vertex]] = {}
    for arc in tree:
        out.setdefault(arc.tail, []).append(arc.head)
    start = [(1, t) for t in range(1, grid.T + 1) if (1, t) in touched]
    seen = set(start)
    queue = deque(start)
    while queue:
        v = queue.popleft()
        for w in out.get(v, ()):
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return seen


def build_accessible_spanning_tree(grid: GridSpec, extreme_flow: FlowAssignment) -> SpanningTreeSolution:
    """Grow the free arcs into a spanning tree in which every vertex is reachable from row one.

    Each step adds the first arc in row-major order whose tail is already
    reachable from row one and whose endpoints lie in different components.
    When no such arc exists, the first isolated row-one vertex is attached by
    its forward arc, or by its downward arc in the last column.

    Raises:
        InfeasibleFlow: The flow is not feasible.
        NotExtreme: The free arcs contain a cycle.
        PreconditionSources: A source lies below row one.
        PropertyViolated: The growth gets stuck before spanning the grid.
    """
    below = [l for l in grid.source_rows() if l > 1]
    if below:
        raise PreconditionSources(f"Sources found in row {below[0]}; strip rows above the source row first")
    free = _validated_free_arcs(grid, extreme_flow)

    dsu = DisjointSet(grid.vertices())
    tree: set[Arc] = set()
    touched: set[Vertex] = set()
    for arc in free:
        dsu.union(arc.tail, arc.head)
        tree.add(arc)
        touched.update((arc.tail, arc.head))

    arcs = grid.arcs()
    while dsu.components > 1:
        accessible = _accessible_vertices(grid, tree, touched)
        pick: Optional[Arc] = None
        for arc in arcs:
            if arc not in tree and arc.tail in accessible and not dsu.connected(arc.tail, arc.head):
                pick = arc
                break
        if pick is None:
            isolated = [(1, t) for t in range(1, grid.T + 1) if (1, t) not in touched]
            if not isolated:
                raise PropertyViolated("No eligible arc and no isolated row-one vertex left")
            _, t = isolated[0]
            if t == grid.T and grid.L == 1:
                raise PropertyViolated("Single-row grid cannot be completed")
            pick = Arc((1, t), (1, t + 1)) if t < grid.T else Arc((1, t), (2, t))
        dsu.union(pick.tail, pick.head)
        tree.add(pick)
        touched.update((pick.tail, pick.head))

    logger.debug("Accessible tree: %d free arcs, %d added", len(free), len(tree) - len(free))
    return SpanningTreeSolution(extreme_flow, frozenset(tree), frozenset(free))


def restrict_flow(grid: GridSpec, window: GridSpec, flow: FlowAssignment, top: int) -> FlowAssignment:
    """Map a flow onto the row window starting at row ``top``."""
    shift = top - 1
    values = {}
    for arc in window.arcs():
        (l1, t1), (l2, t2) = arc.tail, arc.head
        values[arc] = flow[Arc((l1 + shift, t1), (l2 + shift, t2))]
    return FlowAssignment.from_mapping(window, values)


def accessible_tree_for(grid: GridSpec, extreme_flow: FlowAssignment) -> tuple[GridSpec, SpanningTreeSolution]:
    """Strip the rows above the source row, then build the accessible tree there.

    Returns the window grid together with the tree solution on it.
    """
    sources = grid.source_rows()
    if len(sources) > 1:
        raise PreconditionSources(f"Sources span rows {sources}")
    top = sources[0] if sources else 1
    if top == 1:
        return grid, build_accessible_spanning_tree(grid, extreme_flow)
    window = strip_rows(grid, top, grid.L)
    return window, build_accessible_spanning_tree(window, restrict_flow(grid, window, extreme_flow, top))


# ==================== Row-one reach (kappa) ====================


@dataclass(frozen=True)
class KappaTable:
    """``kappa[v]``: smallest row-one column with a directed tree path to v;
    ``paths[v]``: the arcs of that path in order."""

    L: int
    T: int
    kappa: dict[Vertex, int]
    paths: dict[Vertex, tuple[Arc, ...]]

    def __getitem__(self, v: Vertex) -> int:
        return self.kappa[v]

    def row(self, l: int) -> list[int]:
        return [self.kappa[(l, i)] for i in range(1, self.T + 1)]


def compute_kappa(grid: GridSpec, tree_solution: SpanningTreeSolution) -> KappaTable:
    """
    Raises:
        PropertyViolated: If some vertex has no directed tree path from row one.
    """
    out: dict[Vertex, list[Arc]] = {}
    for arc in sorted(tree_solution.tree_arcs):
        out.setdefault(arc.tail, []).append(arc)

    kappa: dict[Vertex, int] = {}
    paths: dict[Vertex, tuple[Arc, ...]] = {}
    for j in range(1, grid.T + 1):
        root = (1, j)
        local: dict[Vertex, tuple[Arc, ...]] = {root: ()}
        stack = [root]
        while stack:
            v = stack.pop()
            for arc in out.get(v, ()):
                if arc.head not in local:
                    local[arc.head] = local[v] + (arc,)
                    stack.append(arc.head)
        for v, path in local.items():
            if v not in kappa:
                kappa[v] = j
                paths[v] = path

    missing = [v for v in grid.vertices() if v not in kappa]
    if missing:
        l, t = missing[0]
        raise PropertyViolated(f"Vertex v{l},{t} is not reachable from row one")
    return KappaTable(grid.L, grid.T, kappa, paths)


# ==================== Vertex types ====================


class VertexType(str, enum.Enum):
    TYPE1 = "1"
    TYPE2A = "2A"
    TYPE2B = "2B"

    @property
    def side(self) -> int:
        return 1 if self is VertexType.TYPE1 else 2


@dataclass(frozen=True)
class VertexTypeMap:
    arc: Arc
    labels: dict[Vertex, VertexType]
    T: int

    def row_labels(self, l: int) -> list[VertexType]:
        return [self.labels[(l, i)] for i in range(1, self.T + 1)]

    def of_type(self, kind: VertexType) -> list[Vertex]:
        return sorted(v for v, label in self.labels.items() if label is kind)

    @property
    def type1(self) -> list[Vertex]:
        return self.of_type(VertexType.TYPE1)


def tail_component(grid: GridSpec, tree_solution: SpanningTreeSolution, arc: Arc) -> set[Vertex]:
    """Vertices on the tail side once ``arc`` is deleted from the tree."""
    if arc not in tree_solution.tree_arcs:
        raise NontreeArc(arc)
    neighbours: dict[Vertex, list[Vertex]] = {v: [] for v in grid.vertices()}
    for a in tree_solution.tree_arcs:
        if a != arc:
            neighbours[a.tail].append(a.head)
            neighbours[a.head].append(a.tail)
    seen = {arc.tail}
    queue = deque([arc.tail])
    while queue:
        v = queue.popleft()
        for w in neighbours[v]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return seen


def classify_vertices(
    grid: GridSpec,
    tree_solution: SpanningTreeSolution,
    arc: Arc,
    kappa: Optional[KappaTable] = None,
) -> VertexTypeMap:
    """Label each vertex Type1 (tail side), Type2A (head side, row-one path uses
    ``arc``) or Type2B (head side otherwise)."""
    side1 = tail_component(grid, tree_solution, arc)
    kappa = kappa if kappa is not None else compute_kappa(grid, tree_solution)
    labels = {}
    for v in grid.vertices():
        if v in side1:
            labels[v] = VertexType.TYPE1
        elif arc in kappa.paths[v]:
            labels[v] = VertexType.TYPE2A
        else:
            labels[v] = VertexType.TYPE2B
    return VertexTypeMap(arc, labels, grid.T)


def flow_via_tree_cut(grid: GridSpec, tree_solution: SpanningTreeSolution, arc: Arc) -> Number:
    """Flow on a tree arc from the cut it induces: supply on the tail side,
    plus nontree flow entering that side, minus nontree flow leaving it."""
    side1 = tail_component(grid, tree_solution, arc)
    value: Number = sum(grid.b(*v) for v in side1)
    flow = tree_solution.flow
    for other in grid.arcs():
        if other in tree_solution.tree_arcs:
            continue
        tail_in, head_in = other.tail in side1, other.head in side1
        if tail_in and not head_in:
            value -= flow[other]
        elif head_in and not tail_in:
            value += flow[other]
    return value


# ==================== Structural checks ====================


def maximal_intervals(labels: Sequence[Hashable]) -> list[tuple[Hashable, int, int]]:
    """Runs of equal labels as ``(label, first, last)`` with 1-based positions."""
    runs: list[tuple[Hashable, int, int]] = []
    for i, label in enumerate(labels, start=1):
        if runs and runs[-1][0] == label:
            runs[-1] = (label, runs[-1][1], i)
        else:
            runs.append((label, i, i))
    return runs


def boundary_cycle(L: int, T: int) -> list[Vertex]:
    """Outer-face vertices in clockwise order starting at v1,1."""
    if L == 1:
        return [(1, t) for t in range(1, T + 1)]
    if T == 1:
        return [(l, 1) for l in range(1, L + 1)]
    cycle = [(1, t) for t in range(1, T + 1)]
    cycle += [(l, T) for l in range(2, L + 1)]
    cycle += [(L, t) for t in range(T - 1, 0, -1)]
    cycle += [(l, 1) for l in range(L - 1, 1, -1)]
    return cycle


def _cyclic_changes(labels: Sequence[Hashable]) -> int:
    return sum(1 for i in range(len(labels)) if labels[i] != labels[i - 1])


def check_structural_lemmas(grid: GridSpec, tree_solution: SpanningTreeSolution) -> list[str]:
    """Every structural property that fails on this tree (empty when all hold)."""
    try:
        kappa = compute_kappa(grid, tree_solution)
    except PropertyViolated as exc:
        return [f"accessibility: {exc}"]

    problems: list[str] = []
    for l in range(1, grid.L + 1):
        row = kappa.row(l)
        if any(a > b for a, b in zip(row, row[1:])):
            problems.append(f"kappa decreases along row {l}: {row}")

    heads: dict[Vertex, set[Arc]] = {}
    for path in kappa.paths.values():
        for arc in path:
            heads.setdefault(arc.head, set()).add(arc)
    for v, incoming in heads.items():
        if len(incoming) > 1:
            problems.append(f"row-one paths enter v{v[0]},{v[1]} through {len(incoming)} arcs")

    cycle = boundary_cycle(grid.L, grid.T)
    for arc in sorted(tree_solution.tree_arcs):
        types = classify_vertices(grid, tree_solution, arc, kappa)
        name = str(arc)

        sides = [label.side for label in types.row_labels(1)]
        if len(maximal_intervals(sides)) > 3:
            problems.append(f"{name}: row one alternates between sides {sides}")

        for l in range(1, grid.L + 1):
            labels = types.row_labels(l)
            cols = [i for i, label in enumerate(labels, start=1) if label is VertexType.TYPE2A]
            if cols and cols[-1] - cols[0] + 1 != len(cols):
                problems.append(f"{name}: Type2A vertices of row {l} are not contiguous")
            if l > 1:
                mixed = [label for label in labels if label is not VertexType.TYPE2A]
                if len(maximal_intervals(mixed)) > 3:
                    problems.append(f"{name}: row {l} alternates between Type1 and Type2B")
            side_runs = maximal_intervals([label.side for label in labels])
            ones = sum(1 for side, _, _ in side_runs if side == 1)
            twos = len(side_runs) - ones
            if ones > 2 and twos > 2:
                problems.append(f"{name}: row {l} has {ones} Type1 and {twos} Type2 intervals")

        expected = tree_solution.flow[arc]
        got = flow_via_tree_cut(grid, tree_solution, arc)
        if got != expected:
            problems.append(f"{name}: cut formula gives {got}, flow is {expected}")

        around = [types.labels[v].side for v in cycle]
        closed = grid.L > 1 and grid.T > 1
        if closed and _cyclic_changes(around) > 2:
            problems.append(f"{name}: boundary labels alternate around the outer face")
        elif not closed and len(maximal_intervals(around)) > 3:
            problems.append(f"{name}: boundary labels alternate along the grid line")
    return problems
