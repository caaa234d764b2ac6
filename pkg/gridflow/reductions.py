"""
Instance generators: lot-sizing models mapped onto the grid, and the
knapsack and partition constructions that make the general grid problem hard.

Each hardness generator returns the grid together with a ``Certificate``
stating how the optimal cost answers the source question. Arcs the
constructions leave out are kept but priced ``FixedChargeCost(M, 0)`` with M
above any sensible answer; zero capacities would change the case
classification instead.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Union

from .core.costs import ZERO, CostSpec, FixedChargeCost, Number
from .core.grid import Arc, GridSpec, build_grid
from .errors import BadB, InvalidInstanceError, OddTotal

logger = logging.getLogger(__name__)

CostArg = Union[CostSpec, Sequence[CostSpec], None]


@dataclass(frozen=True)
class KnapsackInstance:
    """Is there a subset with value at least ``target`` and cost at most ``budget``?"""

    values: tuple[int, ...]
    costs: tuple[int, ...]
    budget: int
    target: int

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))
        object.__setattr__(self, "costs", tuple(int(c) for c in self.costs))
        if not self.values or len(self.values) != len(self.costs):
            raise InvalidInstanceError("Knapsack needs n >= 1 items with one cost per value")
        if any(v <= 0 for v in self.values) or any(c <= 0 for c in self.costs):
            raise InvalidInstanceError("Knapsack values and costs must be positive")
        if self.budget < 0 or self.target < 0:
            raise InvalidInstanceError("Knapsack budget and target must be nonnegative")

    @property
    def n(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class PartitionInstance:
    """Can ``values`` be split into two halves of equal sum?"""

    values: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))
        if not self.values or any(v <= 0 for v in self.values):
            raise InvalidInstanceError("Partition needs n >= 1 positive values")

    @property
    def n(self) -> int:
        return len(self.values)

    @property
    def total(self) -> int:
        return sum(self.values)


@dataclass(frozen=True)
class Certificate:
    """How the optimal cost of a generated instance answers the source question.

    ``comparison`` is ``"le"`` (yes iff optimum <= threshold) or ``"eq"``
    (yes iff optimum == threshold). ``expected`` is the source verdict when it
    was computed.
    """

    threshold: Number
    comparison: str
    expected: Optional[bool] = None

    def holds(self, optimum: Optional[Number], tol: float = 1e-9) -> bool:
        """Verdict for an optimum; None stands for an infeasible instance."""
        if optimum is None:
            return False
        if self.comparison == "eq":
            return abs(optimum - self.threshold) <= tol
        return optimum <= self.threshold + tol

    def to_dict(self) -> dict:
        return {"threshold": self.threshold, "comparison": self.comparison, "expected": self.expected}


@dataclass(frozen=True)
class ReducedInstance:
    grid: GridSpec
    certificate: Certificate
    big_m: Number = 0


# ==================== Lot sizing ====================


def _per_period(cost: CostArg, T: int, default: CostSpec, what: str) -> list[CostSpec]:
    if cost is None:
        return [default] * T
    if callable(cost):
        return [cost] * T
    costs = list(cost)
    if len(costs) != T:
        raise InvalidInstanceError(f"{what}: expected {T} entries, got {len(costs)}")
    return costs


def lot_sizing_to_mfg(
    demands_by_row: Sequence[Sequence[int]],
    *,
    production: CostArg = None,
    holding: CostArg = None,
    transfer: CostArg = None,
    raw_holding: CostArg = None,
    production_capacity: Union[int, Sequence[Optional[int]], None] = None,
) -> GridSpec:
    """Multi-echelon lot sizing as a grid with a single source at v1,1.

    Row 1 carries raw material, rows 2..L are echelons whose demands come from
    ``demands_by_row`` (one sequence of length T per echelon). Downward arcs
    from row 1 produce, deeper downward arcs transfer between echelons and
    forward arcs in rows >= 2 hold stock.

    Args:
        demands_by_row: Nonnegative demands, ``L - 1`` rows of T periods.
        production: Cost on the production arcs (one spec or one per period).
        holding: Cost on holding arcs of every echelon (one spec or one per arc).
        transfer: Cost on transfer arcs between echelons.
        raw_holding: Cost on row-1 forward arcs; free by default.
        production_capacity: Bound on production per period (None = unbounded).
    """
    demands = [[int(d) for d in row] for row in demands_by_row]
    if not demands or not demands[0]:
        raise InvalidInstanceError("Lot sizing needs at least one echelon and one period")
    T = len(demands[0])
    if any(len(row) != T for row in demands):
        raise InvalidInstanceError("Every echelon needs the same number of periods")
    if any(d < 0 for row in demands for d in row):
        raise InvalidInstanceError("Demands must be nonnegative")
    L = len(demands) + 1

    supplies = [[0] * T] + [[-d for d in row] for row in demands]
    supplies[0][0] = sum(sum(row) for row in demands)

    produce = _per_period(production, T, ZERO, "production")
    hold = _per_period(holding, max(T - 1, 0), ZERO, "holding")
    move = _per_period(transfer, T, ZERO, "transfer")
    raw = _per_period(raw_holding, max(T - 1, 0), ZERO, "raw_holding")

    costs: dict[Arc, CostSpec] = {}
    for t in range(1, T + 1):
        costs[Arc((1, t), (2, t))] = produce[t - 1]
        for l in range(2, L):
            costs[Arc((l, t), (l + 1, t))] = move[t - 1]
    for t in range(1, T):
        costs[Arc((1, t), (1, t + 1))] = raw[t - 1]
        for l in range(2, L + 1):
            costs[Arc((l, t), (l, t + 1))] = hold[t - 1]

    capacities: dict[Arc, int] = {}
    if production_capacity is not None:
        caps = [production_capacity] * T if isinstance(production_capacity, int) else list(production_capacity)
        if len(caps) != T:
            raise InvalidInstanceError(f"production_capacity: expected {T} entries, got {len(caps)}")
        for t, cap in enumerate(caps, start=1):
            if cap is not None:
                capacities[Arc((1, t), (2, t))] = cap

    return build_grid(L, T, supplies, capacities, costs)


def ulsp_to_mfg(demands: Sequence[int], production_costs: CostArg, holding_costs: CostArg) -> GridSpec:
    """Uncapacitated single-item lot sizing as a two-row grid."""
    return lot_sizing_to_mfg([demands], production=production_costs, holding=holding_costs)


def constant_capacity_lsp_to_mfg(
    demands: Sequence[int],
    capacity: int,
    production_costs: CostArg,
    holding_costs: CostArg,
) -> GridSpec:
    """Lot sizing with the same production capacity in every period."""
    return lot_sizing_to_mfg(
        [demands],
        production=production_costs,
        holding=holding_costs,
        production_capacity=capacity,
    )


# ==================== Knapsack ====================


def knapsack_verdict(kp: KnapsackInstance) -> bool:
    """Exhaustive answer for small knapsack instances."""
    for picks in itertools.product((False, True), repeat=kp.n):
        value = sum(v for v, take in zip(kp.values, picks) if take)
        cost = sum(c for c, take in zip(kp.costs, picks) if take)
        if value >= kp.target and cost <= kp.budget:
            return True
    return False


def _knapsack_big_m(kp: KnapsackInstance) -> int:
    return sum(kp.costs) + kp.budget + 1


def knapsack_to_mfg_sinks_two_rows(kp: KnapsackInstance, B: Optional[int] = None) -> ReducedInstance:
    """Three rows, n columns, uniform downward capacity B.

    v1,1 supplies every sink. Each v2,i needs ``B - y_i``, so its incoming
    downward arc has ``y_i`` spare units, which reach v3,n only through the
    fixed-charge arc v2,i -> v3,i. Row 2 has no forward arcs in the
    construction. Answer: yes iff the optimum is at most the budget.
    """
    B = max(kp.values) if B is None else int(B)
    if B < max(kp.values):
        raise BadB(B, max(kp.values))
    n = kp.n
    big_m = _knapsack_big_m(kp)

    supplies = [[0] * n for _ in range(3)]
    supplies[0][0] = sum(B - y for y in kp.values) + kp.target
    for i, y in enumerate(kp.values):
        supplies[1][i] = -(B - y)
    supplies[2][n - 1] -= kp.target

    capacities: dict[Arc, int] = {}
    costs: dict[Arc, CostSpec] = {}
    for i in range(1, n + 1):
        capacities[Arc((1, i), (2, i))] = B
        capacities[Arc((2, i), (3, i))] = B
        costs[Arc((2, i), (3, i))] = FixedChargeCost(kp.costs[i - 1], 0)
    for i in range(1, n):
        costs[Arc((2, i), (2, i + 1))] = FixedChargeCost(big_m, 0)

    grid = build_grid(3, n, supplies, capacities, costs)
    return ReducedInstance(grid, Certificate(kp.budget, "le", knapsack_verdict(kp)), big_m)


def knapsack_to_mfg_forward_caps(kp: KnapsackInstance) -> ReducedInstance:
    """Three rows, 2n columns, item i as a capacitated forward arc in row 2.

    Flow runs along row 1, may drop into row 2 at column 2i-1, cross the item
    arc v2,2i-1 -> v2,2i (capacity y_i, fixed charge c_i) and then drop to row 3,
    which carries it to the sink v3,2n. Answer: yes iff the optimum is at most
    the budget.
    """
    n = kp.n
    T = 2 * n
    big_m = _knapsack_big_m(kp)
    supplies = [[0] * T for _ in range(3)]
    supplies[0][0] = kp.target
    supplies[2][T - 1] = -kp.target

    capacities: dict[Arc, int] = {}
    costs: dict[Arc, CostSpec] = {}
    for i in range(1, n + 1):
        odd, even = 2 * i - 1, 2 * i
        item = Arc((2, odd), (2, even))
        capacities[item] = kp.values[i - 1]
        costs[item] = FixedChargeCost(kp.costs[i - 1], 0)
        costs[Arc((1, even), (2, even))] = FixedChargeCost(big_m, 0)
        costs[Arc((2, odd), (3, odd))] = FixedChargeCost(big_m, 0)
        if i < n:
            costs[Arc((2, even), (2, even + 1))] = FixedChargeCost(big_m, 0)

    grid = build_grid(3, T, supplies, capacities, costs)
    return ReducedInstance(grid, Certificate(kp.budget, "le", knapsack_verdict(kp)), big_m)


# ==================== Partition ====================


def partition_verdict(pp: PartitionInstance) -> bool:
    """Exhaustive answer for small partition instances."""
    if pp.total % 2:
        return False
    half = pp.total // 2
    reachable = {0}
    for v in pp.values:
        reachable |= {r + v for r in reachable if r + v <= half}
    return half in reachable


def _checked_half(pp: PartitionInstance) -> int:
    if pp.total % 2:
        raise OddTotal(pp.total)
    return pp.total // 2


def partition_to_mfg_varying_L(pp: PartitionInstance) -> ReducedInstance:
    """(n+1) x (n+1) grid with sources v1,1 and v1,2 of half the total each.

    Sink i is v(i+1),(i+1) with demand y_i. Source 1 follows a staircase below
    the diagonal, source 2 one above it; each sink is entered from either
    staircase by an arc with fixed charge 1, every other arc of the staircases
    is free and all remaining arcs cost M = n + 1. Answer: yes iff the optimum
    equals n.
    """
    half = _checked_half(pp)
    n = pp.n
    size = n + 1
    big_m = n + 1

    supplies = [[0] * size for _ in range(size)]
    supplies[0][0] = half
    supplies[0][1] += half
    for i, y in enumerate(pp.values, start=1):
        supplies[i][i] -= y

    cheap: dict[Arc, CostSpec] = {Arc((1, 1), (2, 1)): ZERO}
    for i in range(1, n):
        cheap[Arc((i + 1, i), (i + 2, i))] = ZERO
        cheap[Arc((i + 2, i), (i + 2, i + 1))] = ZERO
        cheap[Arc((i, i + 1), (i, i + 2))] = ZERO
        cheap[Arc((i, i + 2), (i + 1, i + 2))] = ZERO
    for i in range(1, n + 1):
        cheap[Arc((i + 1, i), (i + 1, i + 1))] = FixedChargeCost(1, 0)
        cheap[Arc((i, i + 1), (i + 1, i + 1))] = FixedChargeCost(1, 0)

    costs = {}
    for l in range(1, size + 1):
        for t in range(1, size + 1):
            for arc in (Arc((l, t), (l, t + 1)), Arc((l, t), (l + 1, t))):
                if arc.head[0] <= size and arc.head[1] <= size:
                    costs[arc] = cheap.get(arc, FixedChargeCost(big_m, 0))

    grid = build_grid(size, size, supplies, None, costs)
    return ReducedInstance(grid, Certificate(n, "eq", partition_verdict(pp)), big_m)


def partition_to_mfg_two_terminal_rows(pp: PartitionInstance) -> ReducedInstance:
    """Three rows, 2n columns; a "backbone" source in row 1 and one large
    source per item in row 2.

    v1,1 supplies half the total along row 1; v2,2i-1 supplies D = 2 * total.
    Sink v2,2i needs y_i and is entered from above (out of row 1) or from the
    left (out of v2,2i-1), each at fixed charge 1. Whatever the item sources
    keep drops to row 3 and runs to v3,2n. Answer: yes iff the optimum equals n.
    """
    half = _checked_half(pp)
    n = pp.n
    T = 2 * n
    big_m = n + 1
    D = 2 * pp.total

    supplies = [[0] * T for _ in range(3)]
    supplies[0][0] = half
    for i, y in enumerate(pp.values, start=1):
        supplies[1][2 * i - 2] = D
        supplies[1][2 * i - 1] = -y
    supplies[2][T - 1] = -(n * D - half)

    costs: dict[Arc, CostSpec] = {}
    for i in range(1, n + 1):
        odd, even = 2 * i - 1, 2 * i
        costs[Arc((1, even), (2, even))] = FixedChargeCost(1, 0)
        costs[Arc((2, odd), (2, even))] = FixedChargeCost(1, 0)
        costs[Arc((1, odd), (2, odd))] = FixedChargeCost(big_m, 0)
        costs[Arc((2, even), (3, even))] = FixedChargeCost(big_m, 0)
        if i < n:
            costs[Arc((2, even), (2, even + 1))] = FixedChargeCost(big_m, 0)

    grid = build_grid(3, T, supplies, None, costs)
    return ReducedInstance(grid, Certificate(n, "eq", partition_verdict(pp)), big_m)
