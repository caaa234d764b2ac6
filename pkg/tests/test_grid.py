"""Tests for the grid instance model, flows, feasibility and case classification."""

import numpy as np
import pytest

from gridflow.core.classify import CaseTag, classify_instance
from gridflow.core.costs import LinearCost, OpaqueCost
from gridflow.core.flow import (
    CostLedger,
    FlowAssignment,
    check_flow,
    check_instance_feasible,
    evaluate_cost,
    max_flow_value,
)
from gridflow.core.grid import UNBOUNDED, Arc, build_grid, grid_arcs, strip_rows
from gridflow.errors import (
    InfeasibleFlow,
    InvalidInstanceError,
    NegativeCapacity,
    NetSupplyNonzero,
    NonConcaveCost,
    UnknownArc,
)


class TestArcs:
    def test_row_major_order(self):
        assert [str(a) for a in grid_arcs(2, 2)] == [
            "v1,1->v1,2",
            "v1,1->v2,1",
            "v1,2->v2,2",
            "v2,1->v2,2",
        ]

    def test_parse_both_forms(self):
        assert Arc.parse("v1,1->v1,2") == Arc((1, 1), (1, 2))
        assert Arc.parse("v11->v21") == Arc((1, 1), (2, 1))
        assert Arc.parse("v12,3 -> v12,4") == Arc((12, 3), (12, 4))

    def test_parse_rejects_garbage(self):
        with pytest.raises(ValueError):
            Arc.parse("a->b")

    def test_kind(self):
        assert Arc((1, 1), (1, 2)).kind == "forward"
        assert Arc((1, 1), (2, 1)).kind == "down"


class TestBuildGrid:
    def test_i1(self, i1):
        assert (i1.L, i1.T) == (2, 2)
        assert len(i1.arcs()) == 4
        assert i1.total_supply == 5
        assert i1.is_uncapacitated
        assert i1.source_rows() == [1]
        assert i1.sink_rows() == [2]

    def test_single_row_has_only_forward_arcs(self):
        grid = build_grid(1, 3, [[1, 0, -1]])
        assert all(a.is_forward for a in grid.arcs())
        assert len(grid.arcs()) == 2

    def test_net_supply_must_vanish(self):
        with pytest.raises(NetSupplyNonzero):
            build_grid(2, 2, [[1, 0], [0, 0]])

    def test_bad_shape(self):
        with pytest.raises(InvalidInstanceError):
            build_grid(2, 2, [[1, -1]])

    def test_ragged_supplies(self):
        with pytest.raises(InvalidInstanceError):
            build_grid(2, 2, [[1, -1], [0]])

    def test_non_integer_supply(self):
        with pytest.raises(InvalidInstanceError):
            build_grid(1, 2, [[0.5, -0.5]])

    def test_unknown_arc(self):
        with pytest.raises(UnknownArc):
            build_grid(2, 2, [[0, 0], [0, 0]], {Arc((1, 1), (2, 2)): 3})

    def test_negative_capacity(self):
        with pytest.raises(NegativeCapacity):
            build_grid(2, 2, [[0, 0], [0, 0]], {"v1,1->v1,2": -1})

    @pytest.mark.parametrize("value", ["inf", "Unbounded", None, float("inf"), UNBOUNDED])
    def test_unbounded_spellings(self, value):
        grid = build_grid(1, 2, [[0, 0]], {"v1,1->v1,2": value})
        assert grid.capacity(Arc((1, 1), (1, 2))) is UNBOUNDED

    def test_non_concave_cost(self):
        with pytest.raises(NonConcaveCost):
            build_grid(1, 2, [[3, -3]], costs={"v1,1->v1,2": OpaqueCost(lambda x: x**2, "square")})

    def test_concavity_check_can_be_skipped(self):
        grid = build_grid(
            1, 2, [[3, -3]], costs={"v1,1->v1,2": OpaqueCost(lambda x: x**2, "square")}, check_concavity=False
        )
        assert grid.T == 2

    def test_numpy_supplies(self):
        grid = build_grid(2, 2, np.array([[5, 0], [-2, -3]]))
        assert grid.b(2, 2) == -3

    def test_capacity_helpers(self):
        grid = build_grid(
            2, 3, [[0] * 3, [0] * 3], {"v1,1->v2,1": 2, "v1,2->v2,2": 2, "v1,1->v1,2": 5}
        )
        assert grid.distinct_capacities() == [2, 5]
        assert grid.distinct_capacities("down") == [2]
        assert grid.capacity_counts() == {2: 2, 5: 1}

    def test_missing_arc_accessor(self, i1):
        with pytest.raises(UnknownArc):
            i1.forward_arc(1, 2)


class TestFlowCheck:
    def test_zero_flow_violates_balance_at_terminals(self, i1):
        """Every terminal of i1 is unbalanced by the zero flow; interior vertices are not."""
        verdict = check_flow(i1, FlowAssignment.zero(i1))
        assert not verdict.ok
        assert {v.where for v in verdict.violations} == {(1, 1), (2, 1), (2, 2)}
        assert all(v.kind == "balance" for v in verdict.violations)

    def test_feasible_flow(self, i1, i1_flow_top):
        assert check_flow(i1, FlowAssignment.from_mapping(i1, i1_flow_top)).ok

    def test_bound_violation(self, i1_flow_top):
        """A forward capacity of 1 is exceeded by the top route, and only that arc is reported."""
        grid = build_grid(2, 2, [[5, 0], [-2, -3]], {"v1,1->v1,2": 1})
        verdict = check_flow(grid, FlowAssignment.from_mapping(grid, i1_flow_top))
        bounds = [v for v in verdict.violations if v.kind == "bound"]
        assert [v.where for v in bounds] == [Arc((1, 1), (1, 2))]

    def test_unknown_arc_in_flow(self, i1):
        with pytest.raises(UnknownArc):
            FlowAssignment.from_mapping(i1, {Arc((1, 1), (2, 2)): 1})

    def test_integral_floats_become_ints(self, i1, i1_flow_top):
        """Values like 3.0 are stored as 3."""
        flow = FlowAssignment.from_mapping(i1, {k: float(v) for k, v in i1_flow_top.items()})
        assert isinstance(flow[Arc((1, 1), (1, 2))], int)

    def test_equality_ignores_explicit_zeros(self, i1):
        assert FlowAssignment.zero(i1) == FlowAssignment({})


class TestEvaluateCost:
    def test_top_route(self, i1_linear, i1_flow_top):
        assert evaluate_cost(i1_linear, FlowAssignment.from_mapping(i1_linear, i1_flow_top)) == 8

    def test_down_route(self, i1_linear, i1_flow_down):
        assert evaluate_cost(i1_linear, FlowAssignment.from_mapping(i1_linear, i1_flow_down)) == 8

    def test_zero_costs(self, i1, i1_flow_down):
        assert evaluate_cost(i1, FlowAssignment.from_mapping(i1, i1_flow_down)) == 0

    def test_infeasible_flow_raises(self, i1):
        """Pricing an infeasible flow raises with every violation attached."""
        with pytest.raises(InfeasibleFlow) as excinfo:
            evaluate_cost(i1, FlowAssignment.zero(i1))
        assert len(excinfo.value.violations) == 3

    def test_one_query_per_arc(self, i1_linear, i1_flow_top):
        """Pricing charges the cost oracle once per arc."""
        ledger = CostLedger()
        evaluate_cost(i1_linear, FlowAssignment.from_mapping(i1_linear, i1_flow_top), ledger)
        assert ledger.queries == 4


class TestFeasibility:
    def test_i1_feasible(self, i1):
        assert check_instance_feasible(i1)
        assert max_flow_value(i1) == 5

    def test_cut_too_small(self):
        """With both arcs out of the source capped at 1, only 2 of 5 units ship."""
        grid = build_grid(2, 2, [[5, 0], [-2, -3]], {"v1,1->v1,2": 1, "v1,1->v2,1": 1})
        assert not check_instance_feasible(grid)
        assert max_flow_value(grid) == 2

    def test_zero_supplies(self):
        assert check_instance_feasible(build_grid(3, 3, [[0] * 3] * 3))

    def test_unreachable_sink(self):
        # a sink left of its only source cannot be served
        assert not check_instance_feasible(build_grid(1, 2, [[-1, 1]]))


class TestClassify:
    def test_i1_is_sources_in_one_row(self, i1):
        case = classify_instance(i1)
        assert case.tag is CaseTag.UMFG_SOURCES_ONE_ROW
        assert case.source_row == 1
        assert case.label == "UMfgSourcesOneRow(row 1)"

    def test_two_row_down_capacities(self):
        grid = build_grid(2, 3, [[2, -1, 0], [0, 1, -2]], {"v1,1->v2,1": 3, "v1,3->v2,3": 3})
        case = classify_instance(grid)
        assert case.tag is CaseTag.TWO_ROW_DOWN_CAP
        assert case.k1 == 1

    def test_sources_in_middle_rows_unsupported(self):
        """Sinks above and below a source row in four rows fit no polynomial case."""
        supplies = [[-1, 0], [2, 0], [-1, 0], [0, 0]]
        assert classify_instance(build_grid(4, 2, supplies)).tag is CaseTag.UNSUPPORTED

    def test_capacitated_two_terminal_rows(self):
        grid = build_grid(3, 2, [[2, 0], [0, 0], [0, -2]], {"v2,1->v3,1": 1})
        case = classify_instance(grid)
        assert case.tag is CaseTag.CMFG_TWO_TERMINAL_ROWS
        assert case.k == 1

    def test_uncapacitated_two_terminal_rows(self):
        # sources in rows 1 and 3 rule out the one-row case
        grid = build_grid(3, 2, [[1, -1], [0, 0], [1, -1]])
        case = classify_instance(grid)
        assert case.tag is CaseTag.CMFG_TWO_TERMINAL_ROWS
        assert case.k == 0

    def test_zero_supplies_count_as_row_one(self):
        """An all-zero grid is treated as having its sources in row one."""
        case = classify_instance(build_grid(2, 2, [[0, 0], [0, 0]]))
        assert case.tag is CaseTag.UMFG_SOURCES_ONE_ROW
        assert case.source_row == 1


class TestStripRows:
    def test_window_shifts_rows(self):
        """Stripping the top row renumbers rows and keeps capacities and costs."""
        grid = build_grid(3, 2, [[0, 0], [2, 0], [0, -2]], {"v2,1->v3,1": 4}, {"v2,1->v2,2": LinearCost(2)})
        window = strip_rows(grid, 2, 3)
        assert (window.L, window.T) == (2, 2)
        assert window.supplies == ((2, 0), (0, -2))
        assert window.capacity(Arc((1, 1), (2, 1))) == 4
        assert window.cost(Arc((1, 1), (1, 2))) == LinearCost(2)

    def test_rows_with_terminals_cannot_go(self):
        """Rows holding terminals cannot be stripped."""
        grid = build_grid(2, 2, [[5, 0], [-2, -3]])
        with pytest.raises(InvalidInstanceError):
            strip_rows(grid, 2, 2)
