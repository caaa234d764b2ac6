"""
Candidates when every terminal lies in at most two rows.

Deleting a tree arc splits the tree into two connected parts, so the tail
side meets the outer face in one run of consecutive vertices; with all
terminals in the top and bottom rows of the window its supply is one of the
boundary sums. Nontree arcs crossing the cut sit at 0 or at capacity, which
adds a signed multiple of each capacity value bounded by how many arcs carry
it.
"""

from __future__ import annotations

import logging

from ..core.classify import CaseTag
from ..core.grid import GridSpec
from ..errors import CaseMismatch
from .base import CandidateValueSet, assemble, boundary_sums, bounded_sumset

logger = logging.getLogger(__name__)


def terminal_window(grid: GridSpec) -> tuple[int, int]:
    rows = grid.terminal_rows()
    if not rows:
        return 1, 1
    return rows[0], rows[-1]


class TwoTerminalRowsEnumerator:
    tag = CaseTag.CMFG_TWO_TERMINAL_ROWS

    def generate(self, grid: GridSpec) -> CandidateValueSet:
        rows = grid.terminal_rows()
        if len(rows) > 2:
            raise CaseMismatch(f"Terminals occupy rows {rows}; at most two are allowed")
        top, bottom = terminal_window(grid)

        boundary = boundary_sums(grid.supplies[top - 1], grid.supplies[bottom - 1])
        inside = [a for a in grid.arcs() if top <= a.tail[0] and a.head[0] <= bottom]
        counts = grid.capacity_counts(inside)
        parts = [boundary] + [
            {m * cap for m in range(-count, count + 1)} for cap, count in sorted(counts.items())
        ]
        values = bounded_sumset(parts, 0, grid.total_supply)

        logger.debug(
            "Two terminal rows %d..%d: %d boundary sums, %d capacity values, %d tree values",
            top,
            bottom,
            len(boundary),
            len(counts),
            len(values),
        )
        return assemble(grid, values, (top, bottom), str(self.tag))


def candidates_cmfg_two_rows(grid: GridSpec) -> CandidateValueSet:
    return TwoTerminalRowsEnumerator().generate(grid)
