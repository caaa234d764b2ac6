"""Tests for the layered state graph, its shortest path and flow recovery."""

import pytest

from gridflow.candidates import CandidateValueSet, candidates_for, candidates_with_extra
from gridflow.config import SolverSettings
from gridflow.core.costs import LinearCost
from gridflow.core.flow import CostLedger, FlowAssignment, evaluate_cost
from gridflow.core.grid import build_grid
from gridflow.errors import CaseMismatch, EmptyStage, InternalInconsistency
from gridflow.extreme import enumerate_extreme_points
from gridflow.sampling import random_cmfg, random_two_row, random_umfg
from gridflow.solver import (
    build_state_graph,
    flow_states,
    recover_flow,
    replay_flow,
    shortest_path,
    stage_states,
    transition,
)


class TestStageStates:
    def test_i1(self, i1):
        """Column 1 can hold all 3 units in either row."""
        assert stage_states(i1, 1, candidates_for(i1)) == [(0, 3), (3, 0)]

    def test_forward_capacity_filters(self):
        """A forward cap of 2 leaves only the state routing 3 units through row two."""
        grid = build_grid(2, 2, [[5, 0], [-2, -3]], {"v1,1->v1,2": 2})
        cvs = CandidateValueSet(((0, 2, 3, 5), (0, 2, 3, 5)), "test")
        assert stage_states(grid, 1, cvs) == [(0, 3)]


class TestTransition:
    def test_first_column(self, i1_linear):
        """Stage 0 charges only the downward arcs of column 1."""
        move = transition(i1_linear, 0, (0, 0), (3, 0))
        assert move.u == (2,)
        assert move.cost == 2

    def test_charges_forward_flows_of_previous_state(self, i1_linear):
        """Forward costs of the previous state are charged with the next downward arcs."""
        ledger = CostLedger()
        move = transition(i1_linear, 1, (3, 0), (0, 0), ledger)
        assert move.u == (3,)
        assert move.cost == 6
        assert ledger.queries == 3

    def test_unbalanced_column(self, i1):
        assert transition(i1, 0, (0, 0), (2, 0)) is None

    def test_negative_down_flow(self, i1):
        """Shipping more than row one holds would need a negative downward flow."""
        assert transition(i1, 0, (0, 0), (6, 0)) is None

    def test_down_capacity(self):
        grid = build_grid(2, 2, [[5, 0], [-2, -3]], {"v1,1->v2,1": 1})
        assert transition(grid, 0, (0, 0), (3, 0)) is None

    def test_non_finite_cost(self):
        """A move priced at infinity is dropped."""
        grid = build_grid(
            2, 1, [[2], [-2]], costs={"v1,1->v2,1": lambda x: float("inf") if x else 0}, check_concavity=False
        )
        assert transition(grid, 0, (0, 0), (0, 0)) is None


class TestShortestPath:
    def test_i1(self, i1_linear, i1_flow_down):
        """Both routes cost 8; the tie goes to the lexicographically smaller state."""
        graph = build_state_graph(i1_linear, candidates_for(i1_linear))
        assert graph.state_counts() == [1, 2, 1]
        assert graph.arc_count() == 4
        path = shortest_path(graph)
        assert path.cost == 8
        assert path.states == ((0, 0), (0, 3), (0, 0))
        assert recover_flow(i1_linear, path) == FlowAssignment.from_mapping(i1_linear, i1_flow_down)

    def test_single_column(self):
        grid = build_grid(2, 1, [[2], [-2]], costs={"v1,1->v2,1": LinearCost(3)})
        graph = build_state_graph(grid, candidates_for(grid))
        path = shortest_path(graph)
        assert path.cost == 6
        assert recover_flow(grid, path)[grid.down_arc(1, 1)] == 2

    def test_threads_do_not_change_the_graph(self, i1_linear):
        """Pricing on a thread pool yields the same arcs and query count."""
        cvs = candidates_for(i1_linear)
        single = build_state_graph(i1_linear, cvs, SolverSettings(threads=1))
        pooled = build_state_graph(i1_linear, cvs, SolverSettings(threads=4))
        assert single.arcs == pooled.arcs
        assert single.oracle_queries == pooled.oracle_queries

    def test_row_count_mismatch(self, i1):
        with pytest.raises(CaseMismatch):
            build_state_graph(i1, CandidateValueSet(((0,),), "test"))

    def test_empty_stage(self, i1):
        """Candidates of zero alone cannot carry i1's supply past column 1."""
        with pytest.raises(EmptyStage) as excinfo:
            build_state_graph(i1, CandidateValueSet(((0,), (0,)), "test"))
        assert excinfo.value.stage == 1


class TestRecovery:
    def test_flow_states(self, i1, i1_flow_top):
        flow = FlowAssignment.from_mapping(i1, i1_flow_top)
        assert flow_states(i1, flow) == ((0, 0), (3, 0), (0, 0))

    def test_replay_matches_flow_cost(self, i1_linear, i1_flow_top):
        graph = build_state_graph(i1_linear, candidates_for(i1_linear))
        assert replay_flow(graph, FlowAssignment.from_mapping(i1_linear, i1_flow_top)) == 8

    def test_replay_missing_path(self, i1_linear):
        """A flow splitting supply 1/4 has no matching state path."""
        graph = build_state_graph(i1_linear, candidates_for(i1_linear))
        flow = FlowAssignment.from_mapping(
            i1_linear, {"v1,1->v1,2": 1, "v1,1->v2,1": 4, "v1,2->v2,2": 1, "v2,1->v2,2": 2}
        )
        assert replay_flow(graph, flow) is None

    def test_wrong_length(self, i1):
        with pytest.raises(InternalInconsistency):
            recover_flow(i1, [(0, 0), (0, 0)])

    def test_infeasible_step(self, i1):
        with pytest.raises(InternalInconsistency):
            recover_flow(i1, [(0, 0), (5, 5), (0, 0)])


class TestExtraCandidates:
    """Extra candidate values never change the optimum."""

    def test_i1(self, i1_linear):
        cvs = candidates_for(i1_linear)
        base = shortest_path(build_state_graph(i1_linear, cvs)).cost
        padded = candidates_with_extra(cvs, [1, 4])
        assert shortest_path(build_state_graph(i1_linear, padded)).cost == base

    def test_random(self, rng, scale):
        for _ in range(3 * scale):
            grid = random_umfg(rng, 2, 4)
            cvs = candidates_for(grid)
            base = shortest_path(build_state_graph(grid, cvs)).cost
            extra = range(grid.total_supply + 1)
            padded = shortest_path(build_state_graph(grid, candidates_with_extra(cvs, extra))).cost
            assert padded == pytest.approx(base, rel=1e-9, abs=1e-9)


RANDOM_CASES = [
    ("sources one row", lambda rng: random_umfg(rng, 2, 4)),
    ("sources one row", lambda rng: random_umfg(rng, 3, 3)),
    ("sources in row two", lambda rng: random_umfg(rng, 3, 3, source_row=2)),
    ("two terminal rows", lambda rng: random_cmfg(rng, 3, 3, 1)),
    ("two terminal rows", lambda rng: random_cmfg(rng, 3, 3, 2)),
    ("two rows", lambda rng: random_two_row(rng, 4, 1)),
    ("two rows", lambda rng: random_two_row(rng, 4, 2)),
]


class TestPathsMatchExtremePoints:
    """Every extreme point is a source-to-sink path whose length is its cost."""

    @pytest.mark.parametrize("label, sample", RANDOM_CASES, ids=[f"{c[0]}-{i}" for i, c in enumerate(RANDOM_CASES)])
    def test_random_instances(self, rng, scale, label, sample):
        for _ in range(3 * scale):
            grid = sample(rng)
            graph = build_state_graph(grid, candidates_for(grid))
            for point in enumerate_extreme_points(grid):
                length = replay_flow(graph, point)
                assert length is not None, f"{label}: no path for {flow_states(grid, point)}"
                assert length == pytest.approx(evaluate_cost(grid, point), rel=1e-9, abs=1e-9)
                assert recover_flow(grid, flow_states(grid, point)) == point
