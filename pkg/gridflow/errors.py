"""
Exception hierarchy for gridflow.

Every error raised on purpose by the library derives from ``GridFlowError`` so
the CLI can map it to a stable exit code. Input validation errors also derive
from ``ValueError``.
"""

from __future__ import annotations

from typing import Any, Optional


class GridFlowError(Exception):
    """Base class for all gridflow errors."""


# ── Instance validation ────────────────────────────────────────────


class InvalidInstanceError(GridFlowError, ValueError):
    """The grid instance violates a structural invariant."""


class NetSupplyNonzero(InvalidInstanceError):
    def __init__(self, total: int):
        super().__init__(f"Net supply must be zero, got {total}")
        self.total = total


class UnknownArc(InvalidInstanceError):
    def __init__(self, arc: Any):
        super().__init__(f"Arc {arc} does not exist in the grid")
        self.arc = arc


class NegativeCapacity(InvalidInstanceError):
    def __init__(self, arc: Any, capacity: Any):
        super().__init__(f"Capacity of {arc} must be a nonnegative integer, got {capacity!r}")
        self.arc = arc
        self.capacity = capacity


class NonConcaveCost(InvalidInstanceError):
    def __init__(self, arc: Any, at: float):
        super().__init__(f"Cost on {arc} fails the concavity spot-check near x={at:g}")
        self.arc = arc
        self.at = at


class ParseError(GridFlowError, ValueError):
    """An instance or flow file could not be read."""

    def __init__(self, message: str, line: Optional[int] = None, path: Optional[str] = None):
        where = ""
        if path:
            where = f"{path}: "
        if line is not None:
            where = f"{where}line {line}: "
        super().__init__(f"{where}{message}")
        self.line = line
        self.path = path


# ── Flows and feasibility ──────────────────────────────────────────


class InfeasibleFlow(GridFlowError):
    """A flow assignment violates balance or bound constraints."""

    def __init__(self, violations: list):
        preview = "; ".join(str(v) for v in violations[:3])
        more = f" (+{len(violations) - 3} more)" if len(violations) > 3 else ""
        super().__init__(f"Flow is infeasible: {preview}{more}")
        self.violations = list(violations)


class InfeasibleInstance(GridFlowError):
    """No feasible flow exists for the instance."""


class NotExtreme(GridFlowError):
    """The free arcs of a flow contain an undirected cycle."""


class PreconditionSources(GridFlowError):
    """A source lies below row one where row-one sources are required."""


class NontreeArc(GridFlowError):
    def __init__(self, arc: Any):
        super().__init__(f"Arc {arc} is not a tree arc")
        self.arc = arc


class PropertyViolated(GridFlowError):
    """A structural property of an accessible spanning tree does not hold."""


# ── Enumeration and solving ────────────────────────────────────────


class TooLarge(GridFlowError):
    """The instance exceeds the configured brute-force enumeration budget."""


class CaseMismatch(GridFlowError):
    """An enumerator was applied to an instance outside its case."""


class EmptyStage(GridFlowError):
    def __init__(self, stage: int):
        super().__init__(f"No candidate state survives filtering at stage {stage}")
        self.stage = stage


class NoPath(GridFlowError):
    """The state graph has no path from the source state to the sink state."""


class InternalInconsistency(GridFlowError):
    """A result failed an internal consistency check."""


class Unsupported(GridFlowError):
    """No polynomial case applies and brute force is out of budget."""


# ── Reductions ─────────────────────────────────────────────────────


class BadB(GridFlowError, ValueError):
    def __init__(self, b: int, max_y: int):
        super().__init__(f"B must be at least max(y) = {max_y}, got {b}")
        self.b = b
        self.max_y = max_y


class OddTotal(GridFlowError, ValueError):
    def __init__(self, total: int):
        super().__init__(f"Partition values must have an even total, got {total}")
        self.total = total
