"""
Dispatch an instance to the cheapest polynomial case that covers it.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass
from typing import Optional

from .grid import GridSpec

logger = logging.getLogger(__name__)


class CaseTag(str, enum.Enum):
    TWO_ROW_DOWN_CAP = "TwoRowDownCap"
    CMFG_TWO_TERMINAL_ROWS = "CMfgTwoTerminalRows"
    UMFG_SOURCES_ONE_ROW = "UMfgSourcesOneRow"
    UNSUPPORTED = "Unsupported"
    BRUTE_FORCE = "BruteForce"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class InstanceCase:
    tag: CaseTag
    k: Optional[int] = None
    k1: Optional[int] = None
    source_row: Optional[int] = None

    @property
    def label(self) -> str:
        if self.tag is CaseTag.TWO_ROW_DOWN_CAP:
            return f"{self.tag}(K1={self.k1})"
        if self.tag is CaseTag.CMFG_TWO_TERMINAL_ROWS:
            return f"{self.tag}(K={self.k})"
        if self.tag is CaseTag.UMFG_SOURCES_ONE_ROW:
            return f"{self.tag}(row {self.source_row})"
        return str(self.tag)

    @property
    def is_polynomial(self) -> bool:
        return self.tag in (
            CaseTag.TWO_ROW_DOWN_CAP,
            CaseTag.CMFG_TWO_TERMINAL_ROWS,
            CaseTag.UMFG_SOURCES_ONE_ROW,
        )

    def __str__(self) -> str:
        return self.label


def single_source_row(grid: GridSpec) -> Optional[int]:
    """The row holding every source with no sink above it, if such a row exists.

    An instance without terminals counts as having its sources in row 1.
    """
    sources = grid.source_rows()
    if len(sources) > 1:
        return None
    row = sources[0] if sources else 1
    if any(l < row for l in grid.sink_rows()):
        return None
    return row


def classify_instance(grid: GridSpec) -> InstanceCase:
    """First matching case, in order: two-row down-capacitated, two terminal rows,
    uncapacitated with sources in one row, then uncapacitated two terminal rows.
    """
    k = len(grid.distinct_capacities())
    terminal_rows = grid.terminal_rows()

    if grid.L == 2 and k >= 1:
        case = InstanceCase(CaseTag.TWO_ROW_DOWN_CAP, k=k, k1=len(grid.distinct_capacities("down")))
    elif k >= 1 and len(terminal_rows) <= 2:
        case = InstanceCase(CaseTag.CMFG_TWO_TERMINAL_ROWS, k=k)
    elif k == 0 and single_source_row(grid) is not None:
        case = InstanceCase(CaseTag.UMFG_SOURCES_ONE_ROW, k=0, source_row=single_source_row(grid))
    elif k == 0 and len(terminal_rows) <= 2:
        case = InstanceCase(CaseTag.CMFG_TWO_TERMINAL_ROWS, k=0)
    else:
        case = InstanceCase(CaseTag.UNSUPPORTED, k=k)

    logger.info("Classified %dx%d instance as %s", grid.L, grid.T, case.label)
    return case
