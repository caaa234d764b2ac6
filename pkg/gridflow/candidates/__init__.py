"""
Candidate flow values for forward arcs, one enumerator per polynomial case.
"""

from .base import (
    CandidateEnumerator,
    CandidateValueSet,
    boundary_sums,
    bounded_sumset,
    candidates_with_extra,
    interval_sums,
    signed_capacity_combinations,
    two_interval_sums,
)
from .factory import candidates_for, create_enumerator
from .sources_one_row import SourcesOneRowEnumerator, candidates_umfg_row_one
from .two_row_down_cap import TwoRowDownCapEnumerator, candidates_tworow_downcap
from .two_terminal_rows import TwoTerminalRowsEnumerator, candidates_cmfg_two_rows

__all__ = [
    "CandidateEnumerator",
    "CandidateValueSet",
    "SourcesOneRowEnumerator",
    "TwoRowDownCapEnumerator",
    "TwoTerminalRowsEnumerator",
    "boundary_sums",
    "bounded_sumset",
    "candidates_cmfg_two_rows",
    "candidates_for",
    "candidates_tworow_downcap",
    "candidates_umfg_row_one",
    "candidates_with_extra",
    "create_enumerator",
    "interval_sums",
    "signed_capacity_combinations",
    "two_interval_sums",
]
