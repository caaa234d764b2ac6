"""
Candidates for two-row grids with capacitated downward arcs.

The cut around a deleted forward tree arc crosses at most one other forward
arc, so nontree forward arcs add a single signed capacity (or nothing);
nontree downward arcs add signed multiples of the downward capacities.
"""

from __future__ import annotations

import logging

from ..core.classify import CaseTag
from ..core.grid import GridSpec
from ..errors import CaseMismatch
from .base import CandidateValueSet, assemble, boundary_sums, bounded_sumset

logger = logging.getLogger(__name__)


class TwoRowDownCapEnumerator:
    tag = CaseTag.TWO_ROW_DOWN_CAP

    def generate(self, grid: GridSpec) -> CandidateValueSet:
        if grid.L != 2:
            raise CaseMismatch(f"Two-row enumerator needs L=2, got L={grid.L}")

        boundary = boundary_sums(grid.supplies[0], grid.supplies[1])
        forward = {0}
        for cap in grid.distinct_capacities("forward"):
            forward.update((cap, -cap))
        down_counts = grid.capacity_counts(grid.down_arcs())
        parts = [boundary, forward] + [
            {m * cap for m in range(-count, count + 1)} for cap, count in sorted(down_counts.items())
        ]
        values = bounded_sumset(parts, 0, grid.total_supply)

        logger.debug(
            "Two-row case: %d boundary sums, %d forward terms, K1=%d, %d tree values",
            len(boundary),
            len(forward),
            len(down_counts),
            len(values),
        )
        return assemble(grid, values, (1, 2), str(self.tag))


def candidates_tworow_downcap(grid: GridSpec) -> CandidateValueSet:
    return TwoRowDownCapEnumerator().generate(grid)
