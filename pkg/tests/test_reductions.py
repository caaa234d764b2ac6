"""Tests for lot-sizing adapters and the knapsack/partition constructions."""

import itertools

import pytest

from gridflow import solve
from gridflow.core.classify import CaseTag, classify_instance
from gridflow.core.costs import FixedChargeCost, LinearCost
from gridflow.core.grid import Arc
from gridflow.errors import BadB, InvalidInstanceError, OddTotal
from gridflow.reductions import (
    Certificate,
    KnapsackInstance,
    PartitionInstance,
    knapsack_to_mfg_forward_caps,
    knapsack_to_mfg_sinks_two_rows,
    knapsack_verdict,
    lot_sizing_to_mfg,
    partition_to_mfg_two_terminal_rows,
    partition_to_mfg_varying_L,
    partition_verdict,
    ulsp_to_mfg,
)


class TestInstances:
    """Input validation and exhaustive verdicts."""

    def test_knapsack_validation(self):
        with pytest.raises(InvalidInstanceError):
            KnapsackInstance((1, 2), (1,), 1, 1)
        with pytest.raises(InvalidInstanceError):
            KnapsackInstance((0,), (1,), 1, 1)
        with pytest.raises(InvalidInstanceError):
            KnapsackInstance((1,), (1,), -1, 1)

    def test_partition_validation(self):
        with pytest.raises(InvalidInstanceError):
            PartitionInstance(())
        assert PartitionInstance([1, 3]).total == 4

    def test_verdicts(self):
        assert knapsack_verdict(KnapsackInstance((3, 4), (2, 3), 3, 4))
        assert not knapsack_verdict(KnapsackInstance((3, 4), (2, 3), 1, 4))
        assert partition_verdict(PartitionInstance((1, 1)))
        assert not partition_verdict(PartitionInstance((1, 3)))
        assert not partition_verdict(PartitionInstance((1, 2)))


class TestCertificate:
    """Threshold tests on an optimum."""

    def test_at_most(self):
        cert = Certificate(3, "le")
        assert cert.holds(3)
        assert not cert.holds(3.5)
        assert not cert.holds(None)

    def test_equal(self):
        cert = Certificate(2, "eq", True)
        assert cert.holds(2.0)
        assert not cert.holds(1)
        assert cert.to_dict() == {"threshold": 2, "comparison": "eq", "expected": True}


class TestLotSizing:
    """Lot-sizing models mapped onto grids."""

    def test_ulsp_layout(self):
        """Production runs down column t, holding along row 2."""
        grid = ulsp_to_mfg([2, 3], FixedChargeCost(5, 0), LinearCost(1))
        assert (grid.L, grid.T) == (2, 2)
        assert grid.supplies == ((5, 0), (-2, -3))
        assert grid.cost(Arc((1, 2), (2, 2))) == FixedChargeCost(5, 0)
        assert grid.cost(Arc((2, 1), (2, 2))) == LinearCost(1)
        assert grid.cost(Arc((1, 1), (1, 2)))(5) == 0
        assert solve(grid).cost == 8

    def test_two_echelons(self):
        """Demand in the last echelon passes through every transfer arc."""
        grid = lot_sizing_to_mfg(
            [[0, 0], [1, 2]],
            production=FixedChargeCost(4, 0),
            transfer=[LinearCost(1), LinearCost(2)],
            holding=LinearCost(1),
        )
        assert grid.L == 3
        assert grid.b(1, 1) == 3
        assert grid.cost(Arc((2, 2), (3, 2))) == LinearCost(2)
        assert classify_instance(grid).tag is CaseTag.UMFG_SOURCES_ONE_ROW
        # one batch in period 1, moved down at once and held a period: 4 + 3 + 2
        assert solve(grid).cost == 9

    def test_production_capacity_per_period(self):
        """None leaves a period uncapacitated."""
        grid = lot_sizing_to_mfg([[2, 3]], production_capacity=[None, 4])
        assert grid.distinct_capacities("down") == [4]

    def test_bad_lengths(self):
        with pytest.raises(InvalidInstanceError):
            ulsp_to_mfg([2, 3], [FixedChargeCost(5, 0)], LinearCost(1))
        with pytest.raises(InvalidInstanceError):
            lot_sizing_to_mfg([[1, 2], [1]])
        with pytest.raises(InvalidInstanceError):
            lot_sizing_to_mfg([[-1, 2]])


class TestKnapsackSinks:
    """Items as fixed-charge arcs from row 2 down to row 3."""

    def test_yes_instance(self):
        """Item 2 alone reaches the target within budget 3."""
        reduced = knapsack_to_mfg_sinks_two_rows(KnapsackInstance((3, 4), (2, 3), 3, 4))
        assert (reduced.grid.L, reduced.grid.T) == (3, 2)
        result = solve(reduced.grid)
        assert result.tag is CaseTag.BRUTE_FORCE
        assert result.cost == 3
        assert reduced.certificate.expected is True
        assert reduced.certificate.holds(result.cost)

    def test_no_instance(self):
        """Budget 1 buys no item worth 4."""
        reduced = knapsack_to_mfg_sinks_two_rows(KnapsackInstance((3, 4), (2, 3), 1, 4))
        cost = solve(reduced.grid).cost
        assert cost == 3
        assert reduced.certificate.expected is False
        assert not reduced.certificate.holds(cost)

    def test_single_item(self):
        """One column with terminals in rows 1 and 3 only."""
        reduced = knapsack_to_mfg_sinks_two_rows(KnapsackInstance((2,), (1,), 1, 2))
        result = solve(reduced.grid)
        assert result.tag is CaseTag.CMFG_TWO_TERMINAL_ROWS
        assert result.cost == 1

    def test_down_capacity_below_largest_value(self):
        with pytest.raises(BadB):
            knapsack_to_mfg_sinks_two_rows(KnapsackInstance((3, 4), (2, 3), 3, 4), B=3)

    def test_big_m(self):
        reduced = knapsack_to_mfg_sinks_two_rows(KnapsackInstance((3, 4), (2, 3), 3, 4))
        assert reduced.big_m == 9


class TestKnapsackForwardCaps:
    """Items as capacitated forward arcs in row 2."""

    @pytest.mark.parametrize("target, expected", [(4, 3), (7, 5), (0, 0)])
    def test_optimum(self, target, expected):
        """Cheapest item set whose capacities cover the target."""
        reduced = knapsack_to_mfg_forward_caps(KnapsackInstance((3, 4), (2, 3), 3, target))
        result = solve(reduced.grid)
        assert result.tag is CaseTag.CMFG_TWO_TERMINAL_ROWS
        assert result.cost == expected

    @pytest.mark.parametrize(
        "values, costs, budget, target",
        [((3, 4), (2, 3), 3, 4), ((3, 4), (2, 3), 4, 7), ((2, 2), (1, 1), 1, 3), ((1, 5), (3, 4), 3, 1), ((2,), (2,), 1, 2)],
    )
    def test_verdict_matches(self, values, costs, budget, target):
        reduced = knapsack_to_mfg_forward_caps(KnapsackInstance(values, costs, budget, target))
        assert reduced.certificate.holds(solve(reduced.grid).cost) == reduced.certificate.expected


class TestPartition:
    """Both partition constructions on hand-checked inputs."""

    def test_staircase_yes(self):
        reduced = partition_to_mfg_varying_L(PartitionInstance((1, 1)))
        result = solve(reduced.grid)
        assert result.tag is CaseTag.UMFG_SOURCES_ONE_ROW
        assert result.cost == 2
        assert reduced.certificate.holds(result.cost)

    def test_staircase_no(self):
        """No subset of (1, 1, 4) sums to 3, so some sink is entered twice."""
        reduced = partition_to_mfg_varying_L(PartitionInstance((1, 1, 4)))
        assert (reduced.grid.L, reduced.grid.T) == (4, 4)
        cost = solve(reduced.grid).cost
        assert cost > 3
        assert not reduced.certificate.holds(cost)

    @pytest.mark.parametrize("values", [(1, 1), (1, 3), (2, 2), (1, 2, 3)])
    def test_staircase_verdict_matches(self, values):
        reduced = partition_to_mfg_varying_L(PartitionInstance(values))
        assert reduced.certificate.holds(solve(reduced.grid).cost) == partition_verdict(PartitionInstance(values))

    def test_two_rows_yes(self):
        reduced = partition_to_mfg_two_terminal_rows(PartitionInstance((1, 1)))
        assert (reduced.grid.L, reduced.grid.T) == (3, 4)
        result = solve(reduced.grid)
        assert result.tag is CaseTag.BRUTE_FORCE
        assert result.cost == 2

    def test_two_rows_no(self):
        reduced = partition_to_mfg_two_terminal_rows(PartitionInstance((1, 3)))
        cost = solve(reduced.grid).cost
        assert cost > 2
        assert not reduced.certificate.holds(cost)

    @pytest.mark.parametrize("build", [partition_to_mfg_varying_L, partition_to_mfg_two_terminal_rows])
    def test_odd_total(self, build):
        """An odd total has no half to hand each source."""
        with pytest.raises(OddTotal):
            build(PartitionInstance((1, 2)))


def knapsacks(max_items, max_entry):
    """Every knapsack with up to ``max_items`` items, entries in 1..max_entry,
    targets up to the total value and budgets up to the total cost."""
    entries = range(1, max_entry + 1)
    for n in range(1, max_items + 1):
        for values in itertools.product(entries, repeat=n):
            for costs in itertools.product(entries, repeat=n):
                for target in range(1, sum(values) + 1):
                    for budget in range(sum(costs) + 1):
                        yield KnapsackInstance(values, costs, budget, target)


def partitions(max_items, max_entry):
    """Every partition instance with an even total."""
    for n in range(1, max_items + 1):
        for values in itertools.product(range(1, max_entry + 1), repeat=n):
            if sum(values) % 2 == 0:
                yield PartitionInstance(values)


def assert_faithful(reduced, verdict):
    """The threshold test on the optimum gives the source answer, and no
    big-M arc carries flow."""
    result = solve(reduced.grid)
    assert reduced.certificate.expected is verdict
    assert reduced.certificate.holds(result.cost) is verdict
    penalty = FixedChargeCost(reduced.big_m, 0)
    assert all(reduced.grid.cost(arc) != penalty for arc in result.flow.positive_arcs())
    return result


class TestReductionFidelity:
    """Exhaustive small sweeps: optimum threshold test == source verdict."""

    def test_knapsack_sinks(self):
        """Down capacity B = max value, the default."""
        for kp in knapsacks(2, 3):
            reduced = knapsack_to_mfg_sinks_two_rows(kp)
            result = assert_faithful(reduced, knapsack_verdict(kp))
            assert result.cost < reduced.big_m

    @pytest.mark.parametrize("extra", [1, 2])
    def test_knapsack_sinks_larger_down_capacity(self, extra):
        """Any B at least the largest value gives the same answers."""
        for kp in knapsacks(2, 2):
            reduced = knapsack_to_mfg_sinks_two_rows(kp, B=max(kp.values) + extra)
            result = assert_faithful(reduced, knapsack_verdict(kp))
            assert result.cost < reduced.big_m

    def test_knapsack_forward_caps(self):
        for kp in knapsacks(2, 3):
            reduced = knapsack_to_mfg_forward_caps(kp)
            result = assert_faithful(reduced, knapsack_verdict(kp))
            assert result.cost < reduced.big_m

    def test_partition_staircase(self):
        """Yes instances cost exactly n; no instance can undercut n."""
        for pp in partitions(3, 4):
            result = assert_faithful(partition_to_mfg_varying_L(pp), partition_verdict(pp))
            assert result.cost >= pp.n

    def test_partition_two_rows(self):
        for pp in partitions(2, 4):
            result = assert_faithful(partition_to_mfg_two_terminal_rows(pp), partition_verdict(pp))
            assert result.cost >= pp.n