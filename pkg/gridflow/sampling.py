"""
Seeded random instances for each solvable case and for lot sizing.

Every generator takes a ``numpy.random.Generator`` so callers control the
seed; nothing here touches global random state. Generators resample until the
instance admits a feasible flow.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core.costs import (
    ZERO,
    CostSpec,
    FixedChargeCost,
    LinearCost,
    PiecewiseConcaveCost,
    PowerCost,
)
from .core.flow import check_instance_feasible
from .core.grid import Arc, Capacity, GridSpec, build_grid, grid_arcs
from .errors import InfeasibleInstance
from .reductions import ulsp_to_mfg

logger = logging.getLogger(__name__)

MAX_ATTEMPTS = 200


def random_cost(rng: np.random.Generator, *, real: bool = False) -> CostSpec:
    """One concave cost of a random kind; integer-valued unless ``real``."""
    kinds = ["zero", "linear", "fixed_charge", "piecewise"] + (["power"] if real else [])
    kind = kinds[int(rng.integers(len(kinds)))]
    if kind == "zero":
        return ZERO
    if kind == "linear":
        return LinearCost(int(rng.integers(0, 5)))
    if kind == "fixed_charge":
        return FixedChargeCost(int(rng.integers(0, 10)), int(rng.integers(0, 4)))
    if kind == "piecewise":
        first = int(rng.integers(1, 4))
        steep = int(rng.integers(1, 6))
        return PiecewiseConcaveCost((first, first + int(rng.integers(1, 4))), (steep, max(steep - 2, 0), 0))
    return PowerCost(round(float(rng.uniform(0.5, 3.0)), 3), round(float(rng.uniform(0.3, 1.0)), 3))


def _random_costs(rng: np.random.Generator, L: int, T: int, real_fraction: float) -> dict[Arc, CostSpec]:
    return {arc: random_cost(rng, real=rng.random() < real_fraction) for arc in grid_arcs(L, T)}


def _spread(rng: np.random.Generator, total: int, slots: int) -> np.ndarray:
    if slots == 0:
        return np.zeros(0, dtype=np.int64)
    return rng.multinomial(total, np.full(slots, 1.0 / slots))


def _place_terminals(
    rng: np.random.Generator,
    L: int,
    T: int,
    source_cells: list[tuple[int, int]],
    sink_cells: list[tuple[int, int]],
    max_supply: int,
) -> np.ndarray:
    supplies = np.zeros((L, T), dtype=np.int64)
    for l, t in source_cells:
        supplies[l - 1, t - 1] = int(rng.integers(0, max_supply + 1))
    total = int(supplies.sum())
    free_sinks = [cell for cell in sink_cells if supplies[cell[0] - 1, cell[1] - 1] == 0]
    for (l, t), demand in zip(free_sinks, _spread(rng, total, len(free_sinks))):
        supplies[l - 1, t - 1] -= int(demand)
    if not free_sinks:
        supplies[:] = 0
    return supplies


def _resample(build: Callable[[], GridSpec], what: str) -> GridSpec:
    for attempt in range(MAX_ATTEMPTS):
        grid = build()
        if check_instance_feasible(grid):
            if attempt:
                logger.debug("Sampled feasible %s after %d attempts", what, attempt + 1)
            return grid
    raise InfeasibleInstance(f"No feasible {what} after {MAX_ATTEMPTS} attempts")


def random_umfg(
    rng: np.random.Generator,
    L: int,
    T: int,
    *,
    source_row: int = 1,
    max_supply: int = 5,
    real_fraction: float = 0.3,
) -> GridSpec:
    """Uncapacitated grid whose sources all sit in ``source_row``.

    Sinks are placed in ``source_row`` and the rows below it.
    """
    sources = [(source_row, t) for t in range(1, T + 1)]
    sinks = [(l, t) for l in range(source_row, L + 1) for t in range(1, T + 1)]

    def build() -> GridSpec:
        supplies = _place_terminals(rng, L, T, sources, sinks, max_supply)
        return build_grid(L, T, supplies.tolist(), None, _random_costs(rng, L, T, real_fraction))

    return _resample(build, f"{L}x{T} uncapacitated instance")


def _distinct_capacities(rng: np.random.Generator, K: int, max_capacity: int) -> list[int]:
    return sorted(int(v) for v in rng.choice(np.arange(1, max_capacity + 1), size=K, replace=False))


def _scatter(rng: np.random.Generator, arcs: list[Arc], values: list[int], density: float) -> dict[Arc, Capacity]:
    """Give every value to at least one arc, then cap further arcs at random."""
    if not values:
        return {}
    order = [arcs[int(i)] for i in rng.permutation(len(arcs))]
    capacities: dict[Arc, Capacity] = {}
    for arc, value in zip(order, values):
        capacities[arc] = value
    for arc in order[len(values):]:
        if rng.random() < density:
            capacities[arc] = values[int(rng.integers(len(values)))]
    return capacities


def random_cmfg(
    rng: np.random.Generator,
    L: int,
    T: int,
    K: int,
    *,
    max_supply: int = 5,
    max_capacity: int = 6,
    density: float = 0.3,
    real_fraction: float = 0.3,
) -> GridSpec:
    """Terminals confined to rows 1 and L, K distinct finite capacities."""
    if L * T * 2 - L - T < K:
        raise ValueError(f"A {L}x{T} grid has too few arcs for {K} capacity values")
    cells = [(l, t) for l in sorted({1, L}) for t in range(1, T + 1)]
    arcs = grid_arcs(L, T)

    def build() -> GridSpec:
        sources = [cell for cell in cells if rng.random() < 0.5]
        sinks = [cell for cell in cells if cell not in sources]
        supplies = _place_terminals(rng, L, T, sources, sinks, max_supply)
        capacities = _scatter(rng, arcs, _distinct_capacities(rng, K, max_capacity), density)
        return build_grid(L, T, supplies.tolist(), capacities, _random_costs(rng, L, T, real_fraction))

    return _resample(build, f"{L}x{T} instance with K={K}")


def random_two_row(
    rng: np.random.Generator,
    T: int,
    K1: int,
    *,
    max_supply: int = 5,
    max_capacity: int = 6,
    forward_density: float = 0.4,
    real_fraction: float = 0.3,
) -> GridSpec:
    """Two rows, K1 distinct downward capacities and arbitrary forward capacities."""
    if K1 > T:
        raise ValueError(f"{T} downward arcs cannot carry {K1} distinct capacities")
    cells = [(l, t) for l in (1, 2) for t in range(1, T + 1)]
    down = [Arc((1, t), (2, t)) for t in range(1, T + 1)]
    forward = [arc for arc in grid_arcs(2, T) if arc.is_forward]

    def build() -> GridSpec:
        sources = [cell for cell in cells if rng.random() < 0.5]
        sinks = [cell for cell in cells if cell not in sources]
        supplies = _place_terminals(rng, 2, T, sources, sinks, max_supply)
        capacities = _scatter(rng, down, _distinct_capacities(rng, K1, max_capacity), 0.5)
        for arc in forward:
            if rng.random() < forward_density:
                capacities[arc] = int(rng.integers(0, max_capacity + 1))
        return build_grid(2, T, supplies.tolist(), capacities, _random_costs(rng, 2, T, real_fraction))

    return _resample(build, f"2x{T} instance with K1={K1}")


@dataclass(frozen=True)
class LotSizingSample:
    """A random uncapacitated lot-sizing instance and its grid."""

    demands: tuple[int, ...]
    setups: tuple[int, ...]
    unit_costs: tuple[int, ...]
    holding_costs: tuple[int, ...]
    grid: GridSpec


def random_ulsp(
    rng: np.random.Generator,
    T: int,
    *,
    max_demand: int = 9,
    max_setup: int = 20,
    max_unit: int = 3,
    max_holding: int = 3,
) -> LotSizingSample:
    """Fixed-charge production and linear holding over T periods."""
    demands = tuple(int(v) for v in rng.integers(0, max_demand + 1, size=T))
    setups = tuple(int(v) for v in rng.integers(0, max_setup + 1, size=T))
    units = tuple(int(v) for v in rng.integers(0, max_unit + 1, size=T))
    holding = tuple(int(v) for v in rng.integers(0, max_holding + 1, size=max(T - 1, 0)))
    grid = ulsp_to_mfg(
        demands,
        [FixedChargeCost(s, u) for s, u in zip(setups, units)],
        [LinearCost(h) for h in holding],
    )
    return LotSizingSample(demands, setups, units, holding, grid)


SAMPLERS = ("random-umfg", "random-cmfg", "random-tworow", "random-ulsp")


def sample_instance(
    model: str,
    rng: np.random.Generator,
    *,
    L: int = 2,
    T: int = 3,
    K: int = 1,
    source_row: int = 1,
    max_supply: int = 5,
) -> GridSpec:
    """Dispatch on a ``random-*`` model name (see ``SAMPLERS``)."""
    if model == "random-umfg":
        return random_umfg(rng, L, T, source_row=source_row, max_supply=max_supply)
    elif model == "random-cmfg":
        return random_cmfg(rng, L, T, K, max_supply=max_supply)
    elif model == "random-tworow":
        return random_two_row(rng, T, K, max_supply=max_supply)
    elif model == "random-ulsp":
        return random_ulsp(rng, T).grid
    raise ValueError(f"Unknown random model: {model!r}. Choose from {', '.join(SAMPLERS)}")
