"""
Candidate value sets and the sumset helpers shared by every enumerator.

A candidate set lists, per grid row, every value a forward arc of that row
can carry in some extreme point (plus harmless extras). All forward arcs in a
row share one sorted set.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Protocol, Sequence, Union

import numpy as np

from ..core.classify import CaseTag
from ..core.grid import GridSpec, is_finite


@dataclass(frozen=True)
class CandidateValueSet:
    rows: tuple[tuple[int, ...], ...]
    provenance: str

    def values_for_row(self, l: int) -> tuple[int, ...]:
        return self.rows[l - 1]

    def size(self) -> int:
        return sum(len(row) for row in self.rows)

    def max_row_size(self) -> int:
        return max((len(row) for row in self.rows), default=0)

    def __contains__(self, item: tuple[int, int]) -> bool:
        l, value = item
        return value in self.rows[l - 1]


class CandidateEnumerator(Protocol):
    """Produces the candidate set for the instances of one case."""

    tag: CaseTag

    def generate(self, grid: GridSpec) -> CandidateValueSet:
        """
        Args:
            grid: An instance of this enumerator's case.

        Returns:
            Per-row candidate values with this case's provenance tag.

        Raises:
            CaseMismatch: If the grid is outside the case.
        """
        ...


def candidates_with_extra(
    cvs: CandidateValueSet,
    extra: Union[Mapping[int, Iterable[int]], Iterable[int]],
) -> CandidateValueSet:
    """Add values to a candidate set; a plain iterable is added to every row.

    Negative extras are dropped, since flows are nonnegative.
    """
    if isinstance(extra, Mapping):
        per_row = {int(l): [int(v) for v in values] for l, values in extra.items()}
    else:
        shared = [int(v) for v in extra]
        per_row = {l: shared for l in range(1, len(cvs.rows) + 1)}
    rows = tuple(
        tuple(sorted(set(row) | {v for v in per_row.get(l, ()) if v >= 0}))
        for l, row in enumerate(cvs.rows, start=1)
    )
    return CandidateValueSet(rows, f"{cvs.provenance}+extra")


# ==================== Sumset helpers ====================


def _prefix(row: Sequence[int]) -> np.ndarray:
    return np.concatenate(([0], np.cumsum(np.asarray(row, dtype=np.int64))))


def interval_sums(row: Sequence[int]) -> set[int]:
    """Sums over every contiguous block of the row, the empty block included."""
    prefix = _prefix(row)
    n = len(row)
    return {int(prefix[j] - prefix[i]) for i in range(n + 1) for j in range(i, n + 1)}


def two_interval_sums(row: Sequence[int]) -> set[int]:
    """Sums over two disjoint contiguous blocks (either may be empty)."""
    n = len(row)
    result: set[int] = set()
    for split in range(n + 1):
        left = interval_sums(row[:split])
        right = interval_sums(row[split:])
        result.update(a + b for a in left for b in right)
    return result


def with_complements(values: Iterable[int], total: int) -> set[int]:
    values = set(values)
    return values | {total - v for v in values}


def boundary_sums(top: Sequence[int], bottom: Sequence[int]) -> set[int]:
    """Supply of every run of consecutive vertices along the outer face, when
    all terminals sit in the top and bottom rows, together with its negation.

    The runs are blocks of one row, a prefix of both rows or a suffix of both
    rows; the rest of the outer face is the complement of one of these, whose
    supply is the negation since supplies sum to zero.
    """
    top_prefix, bottom_prefix = _prefix(top), _prefix(bottom)
    n = len(top)
    values = interval_sums(top) | interval_sums(bottom)
    for i in range(n + 1):
        for j in range(n + 1):
            values.add(int(top_prefix[i] + bottom_prefix[j]))
            values.add(int(top_prefix[n] - top_prefix[i] + bottom_prefix[n] - bottom_prefix[j]))
    return values | {-v for v in values}


def signed_capacity_combinations(counts: Mapping[int, int], lo: int, hi: int) -> set[int]:
    """``sum m_k * U_k`` with ``|m_k|`` at most the number of arcs of capacity
    ``U_k``, restricted to ``[lo, hi]``."""
    parts = [{m * cap for m in range(-count, count + 1)} for cap, count in sorted(counts.items())]
    return bounded_sumset(parts, lo, hi)


def bounded_sumset(parts: Sequence[Iterable[int]], lo: int, hi: int) -> set[int]:
    """All sums picking one value per part that land in ``[lo, hi]``.

    Partial sums are pruned once no choice from the remaining parts can bring
    them back into range.
    """
    parts = [sorted(set(p)) for p in parts]
    if any(not p for p in parts):
        return set()
    suffix_min = [0] * (len(parts) + 1)
    suffix_max = [0] * (len(parts) + 1)
    for i in range(len(parts) - 1, -1, -1):
        suffix_min[i] = suffix_min[i + 1] + parts[i][0]
        suffix_max[i] = suffix_max[i + 1] + parts[i][-1]

    current = {0}
    for i, part in enumerate(parts):
        low = lo - suffix_max[i + 1]
        high = hi - suffix_min[i + 1]
        current = {c + p for c in current for p in part if low <= c + p <= high}
    return current


# ==================== Pruning ====================


def row_upper_bound(grid: GridSpec, l: int) -> int:
    """Largest flow any forward arc of row ``l`` can carry."""
    total = grid.total_supply
    caps = [grid.capacity(grid.forward_arc(l, t)) for t in range(1, grid.T)]
    if not caps:
        return total
    if any(not is_finite(c) for c in caps):
        return total
    return min(total, max(caps))


def nontree_row_values(grid: GridSpec, l: int) -> set[int]:
    """Values a forward arc of row ``l`` takes when it sits at a bound."""
    total = grid.total_supply
    values = {0}
    for t in range(1, grid.T):
        cap = grid.capacity(grid.forward_arc(l, t))
        if is_finite(cap) and cap <= total:
            values.add(cap)
    return values


def assemble(
    grid: GridSpec,
    tree_values: set[int],
    window: tuple[int, int],
    provenance: str,
) -> CandidateValueSet:
    """Per-row sets: pruned tree values plus bound values inside the row window, {0} outside."""
    top, bottom = window
    rows = []
    for l in range(1, grid.L + 1):
        if top <= l <= bottom:
            hi = row_upper_bound(grid, l)
            values = {v for v in tree_values if 0 <= v <= hi} | nontree_row_values(grid, l)
        else:
            values = {0}
        rows.append(tuple(sorted(values)))
    return CandidateValueSet(tuple(rows), provenance)
