"""
The L x T grid instance model.

Vertices are ``(l, t)`` pairs with 1-based row ``l`` and column ``t``. Arcs
either go forward ``(l, t) -> (l, t+1)`` or down ``(l, t) -> (l+1, t)``; no
other arcs exist. Arcs order row-major by tail, forward before down.
"""

from __future__ import annotations

import enum
import logging
import re
from dataclasses import dataclass
from types import MappingProxyType
from typing import Any, Iterable, Mapping, Optional, Sequence, Union

import numpy as np

from ..config import SolverSettings, resolve_settings
from ..errors import InvalidInstanceError, NegativeCapacity, NetSupplyNonzero, NonConcaveCost, UnknownArc
from .costs import ZERO, CostSpec, concavity_violation

logger = logging.getLogger(__name__)

Vertex = tuple[int, int]


class Unbounded(enum.Enum):
    """Symbolic infinite capacity."""

    INF = "inf"

    def __repr__(self) -> str:
        return "UNBOUNDED"


UNBOUNDED = Unbounded.INF
Capacity = Union[int, Unbounded]


def is_finite(capacity: Capacity) -> bool:
    return capacity is not UNBOUNDED


def within_capacity(value: int, capacity: Capacity) -> bool:
    return capacity is UNBOUNDED or value <= capacity


_ARC_PATTERN = re.compile(r"^v(\d+),(\d+)->v(\d+),(\d+)$")
_SHORT_ARC_PATTERN = re.compile(r"^v(\d)(\d)->v(\d)(\d)$")


@dataclass(frozen=True, order=True)
class Arc:
    tail: Vertex
    head: Vertex

    @property
    def is_forward(self) -> bool:
        return self.head == (self.tail[0], self.tail[1] + 1)

    @property
    def is_down(self) -> bool:
        return self.head == (self.tail[0] + 1, self.tail[1])

    @property
    def kind(self) -> str:
        return "forward" if self.is_forward else "down"

    def __str__(self) -> str:
        (l1, t1), (l2, t2) = self.tail, self.head
        return f"v{l1},{t1}->v{l2},{t2}"

    @classmethod
    def parse(cls, text: str) -> "Arc":
        """Parse ``v1,1->v1,2`` (or the compact ``v11->v12`` for one-digit indices)."""
        cleaned = text.replace(" ", "").replace("→", "->")
        match = _ARC_PATTERN.match(cleaned) or _SHORT_ARC_PATTERN.match(cleaned)
        if not match:
            raise ValueError(f"Malformed arc id: {text!r}")
        l1, t1, l2, t2 = (int(g) for g in match.groups())
        return cls((l1, t1), (l2, t2))


def as_arc(key: Any) -> Arc:
    """Normalize an arc key given as Arc, ``((l, t), (l', t'))`` or string."""
    if isinstance(key, Arc):
        return key
    if isinstance(key, str):
        return Arc.parse(key)
    try:
        tail, head = key
        return Arc((int(tail[0]), int(tail[1])), (int(head[0]), int(head[1])))
    except (TypeError, ValueError, IndexError) as exc:
        raise ValueError(f"Cannot interpret {key!r} as an arc") from exc


def grid_arcs(L: int, T: int) -> list[Arc]:
    arcs: list[Arc] = []
    for l in range(1, L + 1):
        for t in range(1, T + 1):
            if t < T:
                arcs.append(Arc((l, t), (l, t + 1)))
            if l < L:
                arcs.append(Arc((l, t), (l + 1, t)))
    return arcs


@dataclass(frozen=True, eq=False)
class GridSpec:
    """A validated, immutable MFG instance. Build it with ``build_grid``."""

    L: int
    T: int
    supplies: tuple[tuple[int, ...], ...]
    capacities: Mapping[Arc, Capacity]
    costs: Mapping[Arc, CostSpec]

    # ── Vertices and arcs ──────────────────────────────────────────

    def b(self, l: int, t: int) -> int:
        return self.supplies[l - 1][t - 1]

    def vertices(self) -> list[Vertex]:
        return [(l, t) for l in range(1, self.L + 1) for t in range(1, self.T + 1)]

    def arcs(self) -> list[Arc]:
        return list(self.capacities.keys())

    def has_arc(self, arc: Arc) -> bool:
        return arc in self.capacities

    def forward_arc(self, l: int, t: int) -> Arc:
        arc = Arc((l, t), (l, t + 1))
        if arc not in self.capacities:
            raise UnknownArc(arc)
        return arc

    def down_arc(self, l: int, t: int) -> Arc:
        arc = Arc((l, t), (l + 1, t))
        if arc not in self.capacities:
            raise UnknownArc(arc)
        return arc

    def forward_arcs(self) -> list[Arc]:
        return [a for a in self.capacities if a.is_forward]

    def down_arcs(self) -> list[Arc]:
        return [a for a in self.capacities if a.is_down]

    def capacity(self, arc: Arc) -> Capacity:
        try:
            return self.capacities[arc]
        except KeyError:
            raise UnknownArc(arc) from None

    def cost(self, arc: Arc) -> CostSpec:
        try:
            return self.costs[arc]
        except KeyError:
            raise UnknownArc(arc) from None

    # ── Supplies ───────────────────────────────────────────────────

    def supply_array(self) -> np.ndarray:
        return np.array(self.supplies, dtype=np.int64).reshape(self.L, self.T)

    @property
    def total_supply(self) -> int:
        return sum(v for row in self.supplies for v in row if v > 0)

    def source_rows(self) -> list[int]:
        return [l for l in range(1, self.L + 1) if any(v > 0 for v in self.supplies[l - 1])]

    def sink_rows(self) -> list[int]:
        return [l for l in range(1, self.L + 1) if any(v < 0 for v in self.supplies[l - 1])]

    def terminal_rows(self) -> list[int]:
        return [l for l in range(1, self.L + 1) if any(v != 0 for v in self.supplies[l - 1])]

    # ── Capacities ─────────────────────────────────────────────────

    def distinct_capacities(self, kind: Optional[str] = None) -> list[int]:
        """Sorted distinct finite capacities, optionally of one arc kind."""
        values = {
            cap
            for arc, cap in self.capacities.items()
            if is_finite(cap) and (kind is None or arc.kind == kind)
        }
        return sorted(values)

    def capacity_counts(self, arcs: Optional[Iterable[Arc]] = None) -> dict[int, int]:
        """Number of arcs carrying each finite capacity value."""
        counts: dict[int, int] = {}
        for arc in self.capacities if arcs is None else arcs:
            cap = self.capacities[arc]
            if is_finite(cap):
                counts[cap] = counts.get(cap, 0) + 1
        return counts

    @property
    def is_uncapacitated(self) -> bool:
        return all(not is_finite(cap) for cap in self.capacities.values())

    def __repr__(self) -> str:
        return f"GridSpec(L={self.L}, T={self.T}, total_supply={self.total_supply})"


def _as_int(value: Any, what: str) -> int:
    if isinstance(value, bool):
        raise InvalidInstanceError(f"{what} must be an integer, got {value!r}")
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, float) and value.is_integer():
        return int(value)
    raise InvalidInstanceError(f"{what} must be an integer, got {value!r}")


def _normalize_capacity(arc: Arc, value: Any) -> Capacity:
    if value is UNBOUNDED or value is None:
        return UNBOUNDED
    if isinstance(value, str) and value.strip().lower() in {"inf", "infinity", "unbounded"}:
        return UNBOUNDED
    if isinstance(value, float) and value == float("inf"):
        return UNBOUNDED
    try:
        cap = _as_int(value, f"Capacity of {arc}")
    except InvalidInstanceError:
        raise NegativeCapacity(arc, value) from None
    if cap < 0:
        raise NegativeCapacity(arc, value)
    return cap


def build_grid(
    L: int,
    T: int,
    supplies: Sequence[Sequence[int]],
    capacities: Optional[Mapping[Any, Any]] = None,
    costs: Optional[Mapping[Any, CostSpec]] = None,
    *,
    settings: Optional[SolverSettings] = None,
    check_concavity: bool = True,
) -> GridSpec:
    """Validate raw instance data and return an immutable ``GridSpec``.

    Args:
        L: Number of rows (>= 1).
        T: Number of columns (>= 1).
        supplies: L x T integer matrix; positive entries are sources.
        capacities: Arc -> nonnegative int or ``UNBOUNDED``; omitted arcs are unbounded.
        costs: Arc -> CostSpec; omitted arcs cost nothing.
        settings: Controls the concavity spot-check.
        check_concavity: Disable only for costs already known to be concave.

    Returns:
        The validated grid.

    Raises:
        InvalidInstanceError: Bad dimensions or a non-integer supply.
        NetSupplyNonzero: Supplies do not sum to zero.
        UnknownArc: A capacity or cost keys an arc outside the grid.
        NegativeCapacity: A capacity is negative or not an integer.
        NonConcaveCost: A cost fails the concavity spot-check.
    """
    L = _as_int(L, "L")
    T = _as_int(T, "T")
    if L < 1 or T < 1:
        raise InvalidInstanceError(f"Grid dimensions must be at least 1x1, got {L}x{T}")

    try:
        matrix = np.asarray(supplies, dtype=object)
    except ValueError as exc:
        raise InvalidInstanceError(f"Supplies must be a {L}x{T} matrix") from exc
    if matrix.shape != (L, T):
        raise InvalidInstanceError(f"Supplies must be a {L}x{T} matrix, got shape {matrix.shape}")
    rows = tuple(
        tuple(_as_int(matrix[l, t], f"Supply at ({l + 1},{t + 1})") for t in range(T)) for l in range(L)
    )
    net = sum(sum(row) for row in rows)
    if net != 0:
        raise NetSupplyNonzero(net)

    arcs = grid_arcs(L, T)
    known = set(arcs)

    cap_map: dict[Arc, Capacity] = {arc: UNBOUNDED for arc in arcs}
    for key, value in (capacities or {}).items():
        arc = as_arc(key)
        if arc not in known:
            raise UnknownArc(arc)
        cap_map[arc] = _normalize_capacity(arc, value)

    cost_map: dict[Arc, CostSpec] = {arc: ZERO for arc in arcs}
    for key, spec in (costs or {}).items():
        arc = as_arc(key)
        if arc not in known:
            raise UnknownArc(arc)
        if not callable(spec):
            raise InvalidInstanceError(f"Cost on {arc} is not callable")
        cost_map[arc] = spec

    grid = GridSpec(
        L=L,
        T=T,
        supplies=rows,
        capacities=MappingProxyType(cap_map),
        costs=MappingProxyType(cost_map),
    )

    if check_concavity:
        _check_costs(grid, resolve_settings(settings))
    logger.debug("Built %dx%d grid, total supply %d", L, T, grid.total_supply)
    return grid


def _check_costs(grid: GridSpec, settings: SolverSettings) -> None:
    total = grid.total_supply
    for arc, spec in grid.costs.items():
        if spec is ZERO:
            continue
        cap = grid.capacities[arc]
        upper = total if not is_finite(cap) else min(cap, total)
        at = concavity_violation(spec, upper, settings.concavity_samples, settings.tolerance)
        if at is not None:
            raise NonConcaveCost(arc, at)


def strip_rows(grid: GridSpec, top: int, bottom: int) -> GridSpec:
    """Return the row window ``top..bottom`` as its own grid.

    Rows outside the window must carry no supply; in every feasible flow the
    arcs touching them then carry zero flow, so the window loses nothing.
    Row ``top`` of the original becomes row 1 of the window.
    """
    if not 1 <= top <= bottom <= grid.L:
        raise InvalidInstanceError(f"Bad row window {top}..{bottom} for L={grid.L}")
    for l in list(range(1, top)) + list(range(bottom + 1, grid.L + 1)):
        if any(grid.supplies[l - 1]):
            raise InvalidInstanceError(f"Row {l} has terminals and cannot be stripped")

    def shift(arc: Arc) -> Arc:
        (l1, t1), (l2, t2) = arc.tail, arc.head
        return Arc((l1 - top + 1, t1), (l2 - top + 1, t2))

    inside = [a for a in grid.arcs() if top <= a.tail[0] and a.head[0] <= bottom]
    return build_grid(
        bottom - top + 1,
        grid.T,
        grid.supplies[top - 1 : bottom],
        {shift(a): grid.capacities[a] for a in inside},
        {shift(a): grid.costs[a] for a in inside},
        check_concavity=False,
    )
