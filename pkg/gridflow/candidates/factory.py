"""
Candidate enumerator factory - returns the enumerator matching an instance case.
"""

from typing import Optional

from ..core.classify import CaseTag, InstanceCase, classify_instance
from ..core.grid import GridSpec
from ..errors import Unsupported
from .base import CandidateEnumerator, CandidateValueSet
from .sources_one_row import SourcesOneRowEnumerator
from .two_row_down_cap import TwoRowDownCapEnumerator
from .two_terminal_rows import TwoTerminalRowsEnumerator


def create_enumerator(case: InstanceCase) -> CandidateEnumerator:
    """
    Create the candidate enumerator for a classified instance.

    Args:
        case: Result of ``classify_instance``

    Returns:
        TwoRowDownCapEnumerator, TwoTerminalRowsEnumerator or SourcesOneRowEnumerator

    Raises:
        Unsupported: If the case has no polynomial enumerator
    """
    if case.tag is CaseTag.TWO_ROW_DOWN_CAP:
        return TwoRowDownCapEnumerator()
    elif case.tag is CaseTag.CMFG_TWO_TERMINAL_ROWS:
        return TwoTerminalRowsEnumerator()
    elif case.tag is CaseTag.UMFG_SOURCES_ONE_ROW:
        return SourcesOneRowEnumerator()
    else:
        raise Unsupported(f"No candidate enumerator for case {case.label}")


def candidates_for(grid: GridSpec, case: Optional[InstanceCase] = None) -> CandidateValueSet:
    case = case if case is not None else classify_instance(grid)
    return create_enumerator(case).generate(grid)
