"""
Candidates for uncapacitated grids whose sources all sit in one row.

Rows above the source row carry no flow. On an accessible spanning tree the
tail side of a deleted arc meets the source row in one block or in the
complement of one, and every lower row in at most two blocks or the
complement of at most two. Uncapacitated nontree arcs carry nothing, so the
arc flow is the sum of one such term per row.
"""

from __future__ import annotations

import logging

from ..core.classify import CaseTag, single_source_row
from ..core.grid import GridSpec
from ..errors import CaseMismatch
from .base import CandidateValueSet, assemble, bounded_sumset, interval_sums, two_interval_sums, with_complements

logger = logging.getLogger(__name__)


class SourcesOneRowEnumerator:
    tag = CaseTag.UMFG_SOURCES_ONE_ROW

    def generate(self, grid: GridSpec) -> CandidateValueSet:
        if not grid.is_uncapacitated:
            raise CaseMismatch("Sources-in-one-row enumerator needs an uncapacitated grid")
        source_row = single_source_row(grid)
        if source_row is None:
            raise CaseMismatch(
                f"Sources span rows {grid.source_rows()} or a sink lies above the source row"
            )

        first = grid.supplies[source_row - 1]
        parts = [with_complements(interval_sums(first), sum(first))]
        for l in range(source_row + 1, grid.L + 1):
            row = grid.supplies[l - 1]
            parts.append(with_complements(two_interval_sums(row), sum(row)))
        values = bounded_sumset(parts, 0, grid.total_supply)

        logger.debug(
            "Sources in row %d: term sizes %s, %d tree values",
            source_row,
            [len(p) for p in parts],
            len(values),
        )
        return assemble(grid, values, (source_row, grid.L), str(self.tag))


def candidates_umfg_row_one(grid: GridSpec) -> CandidateValueSet:
    return SourcesOneRowEnumerator().generate(grid)
