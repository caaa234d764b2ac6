"""
Spanning trees of the (undirected) grid graph.

Trees are enumerated by include/exclude recursion over the row-major arc list:
an arc is contracted into the partial tree when it joins two components, and
deleted only when the arcs still available keep the graph connected.
"""

from __future__ import annotations

import logging
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

from ..core.grid import Arc, Vertex, grid_arcs

logger = logging.getLogger(__name__)


class DisjointSet:
    """Union-find with union by size and an undo stack (no path compression)."""

    def __init__(self, items: Iterable[Vertex]):
        self.parent: dict[Vertex, Vertex] = {v: v for v in items}
        self.size: dict[Vertex, int] = {v: 1 for v in self.parent}
        self._history: list[Optional[tuple[Vertex, Vertex]]] = []
        self.components = len(self.parent)

    def find(self, v: Vertex) -> Vertex:
        while self.parent[v] != v:
            v = self.parent[v]
        return v

    def union(self, a: Vertex, b: Vertex) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            self._history.append(None)
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        self.components -= 1
        self._history.append((ra, rb))
        return True

    def undo(self) -> None:
        change = self._history.pop()
        if change is None:
            return
        ra, rb = change
        self.parent[rb] = rb
        self.size[ra] -= self.size[rb]
        self.components += 1

    def connected(self, a: Vertex, b: Vertex) -> bool:
        return self.find(a) == self.find(b)


def has_cycle(arcs: Iterable[Arc]) -> bool:
    """True iff the arcs contain an undirected cycle."""
    arcs = list(arcs)
    vertices = {a.tail for a in arcs} | {a.head for a in arcs}
    dsu = DisjointSet(vertices)
    return any(not dsu.union(a.tail, a.head) for a in arcs)


def spans(vertices: Sequence[Vertex], arcs: Iterable[Arc]) -> bool:
    dsu = DisjointSet(vertices)
    for arc in arcs:
        dsu.union(arc.tail, arc.head)
    return dsu.components == 1


def enumerate_spanning_trees(L: int, T: int, arcs: Optional[Sequence[Arc]] = None) -> Iterator[frozenset[Arc]]:
    """Yield every spanning tree of the L x T grid as a frozenset of arcs.

    Trees come out in a fixed order determined by the row-major arc list.
    """
    vertices = [(l, t) for l in range(1, L + 1) for t in range(1, T + 1)]
    arcs = list(arcs) if arcs is not None else grid_arcs(L, T)
    need = len(vertices) - 1
    if need == 0:
        yield frozenset()
        return

    dsu = DisjointSet(vertices)
    chosen: list[Arc] = []

    def recurse(i: int) -> Iterator[frozenset[Arc]]:
        if len(chosen) == need:
            yield frozenset(chosen)
            return
        if len(arcs) - i < need - len(chosen):
            return
        arc = arcs[i]
        # contract
        if dsu.union(arc.tail, arc.head):
            chosen.append(arc)
            yield from recurse(i + 1)
            chosen.pop()
        dsu.undo()
        # delete
        if spans(vertices, chosen + arcs[i + 1 :]):
            yield from recurse(i + 1)

    yield from recurse(0)


def count_spanning_trees(L: int, T: int) -> int:
    """Number of spanning trees by the matrix-tree theorem."""
    n = L * T
    if n == 1:
        return 1
    index = {(l, t): (l - 1) * T + (t - 1) for l in range(1, L + 1) for t in range(1, T + 1)}
    laplacian = np.zeros((n, n), dtype=float)
    for arc in grid_arcs(L, T):
        i, j = index[arc.tail], index[arc.head]
        laplacian[i, i] += 1
        laplacian[j, j] += 1
        laplacian[i, j] -= 1
        laplacian[j, i] -= 1
    sign, logdet = np.linalg.slogdet(laplacian[1:, 1:])
    return int(round(sign * np.exp(logdet)))
