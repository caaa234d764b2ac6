"""
Grid instance model: costs, grids, flows, case classification and file I/O.
"""

from .classify import CaseTag, InstanceCase, classify_instance
from .costs import (
    COST_KINDS,
    CostSpec,
    FixedChargeCost,
    LinearCost,
    OpaqueCost,
    PiecewiseConcaveCost,
    PowerCost,
    ZeroCost,
    cost_from_dict,
)
from .flow import CostLedger, FlowAssignment, FlowCheck, Violation, check_flow, check_instance_feasible, evaluate_cost, max_flow_value
from .grid import UNBOUNDED, Arc, GridSpec, build_grid, is_finite, strip_rows
from .instance_io import dump_instance, fingerprint, load_flow, load_instance, parse_instance, write_flow, write_instance

__all__ = [
    "Arc",
    "COST_KINDS",
    "CaseTag",
    "CostLedger",
    "CostSpec",
    "FixedChargeCost",
    "FlowAssignment",
    "FlowCheck",
    "GridSpec",
    "InstanceCase",
    "LinearCost",
    "OpaqueCost",
    "PiecewiseConcaveCost",
    "PowerCost",
    "UNBOUNDED",
    "Violation",
    "ZeroCost",
    "build_grid",
    "check_flow",
    "check_instance_feasible",
    "classify_instance",
    "cost_from_dict",
    "dump_instance",
    "evaluate_cost",
    "fingerprint",
    "is_finite",
    "load_flow",
    "load_instance",
    "max_flow_value",
    "parse_instance",
    "strip_rows",
    "write_flow",
    "write_instance",
]
