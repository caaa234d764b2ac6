"""Tests for instance and flow files."""

import json
import re

import pytest

from gridflow.core.costs import FixedChargeCost, LinearCost, OpaqueCost
from gridflow.core.flow import FlowAssignment
from gridflow.core.grid import UNBOUNDED, Arc, build_grid
from gridflow.core.instance_io import (
    dump_flow,
    dump_instance,
    fingerprint,
    load_flow,
    load_instance,
    parse_flow,
    parse_instance,
    write_flow,
    write_instance,
)
from gridflow.errors import NetSupplyNonzero, ParseError, UnknownArc

I1_TEXT = json.dumps(
    {
        "L": 2,
        "T": 2,
        "supplies": [[5, 0], [-2, -3]],
        "arcs": [
            {"from": [1, 1], "to": [2, 1], "capacity": 4, "cost": {"kind": "linear", "params": {"slope": 2}}},
            {"from": [2, 1], "to": [2, 2], "capacity": "inf"},
        ],
    }
)


class TestParseInstance:
    def test_arcs_and_defaults(self):
        """Listed arcs take their values; the rest are unbounded and free."""
        grid = parse_instance(I1_TEXT)
        assert grid.capacity(Arc((1, 1), (2, 1))) == 4
        assert grid.cost(Arc((1, 1), (2, 1))) == LinearCost(2)
        assert grid.capacity(Arc((1, 1), (1, 2))) is UNBOUNDED
        assert grid.cost(Arc((1, 1), (1, 2)))(7) == 0

    def test_syntax_error_reports_line(self):
        with pytest.raises(ParseError) as excinfo:
            parse_instance('{"L": 2,\n "T": }', path="bad.json")
        assert excinfo.value.line == 2
        assert "bad.json: line 2" in str(excinfo.value)

    def test_missing_field(self):
        with pytest.raises(ParseError, match="'supplies'"):
            parse_instance('{"L": 1, "T": 1}')

    def test_not_an_object(self):
        with pytest.raises(ParseError):
            parse_instance("[1, 2]")

    def test_bad_vertex(self):
        text = json.dumps({"L": 1, "T": 2, "supplies": [[0, 0]], "arcs": [{"from": [1], "to": [1, 2]}]})
        with pytest.raises(ParseError, match="arcs\\[0\\].from"):
            parse_instance(text)

    def test_bad_vertex_reports_its_line(self):
        text = (
            "{\n"
            ' "L": 1,\n'
            ' "T": 2,\n'
            ' "supplies": [[0, 0]],\n'
            ' "arcs": [\n'
            '  {"from": [1, 1], "to": [1, 2]},\n'
            '  {"from": [1], "to": [1, 2]}\n'
            " ]\n"
            "}"
        )
        with pytest.raises(ParseError, match="arcs\\[1\\].from") as excinfo:
            parse_instance(text, path="grid.json")
        assert excinfo.value.line == 7
        assert "grid.json: line 7" in str(excinfo.value)

    def test_missing_field_reports_object_line(self):
        with pytest.raises(ParseError) as excinfo:
            parse_instance('\n\n{"L": 1, "T": 1}')
        assert excinfo.value.line == 3

    def test_arcs_not_a_list_reports_key_line(self):
        with pytest.raises(ParseError, match="'arcs' must be a list") as excinfo:
            parse_instance('{"L": 1, "T": 1,\n "supplies": [[0]],\n "arcs": 5}')
        assert excinfo.value.line == 3

    def test_unknown_cost_kind(self):
        text = json.dumps(
            {"L": 1, "T": 2, "supplies": [[0, 0]], "arcs": [{"from": [1, 1], "to": [1, 2], "cost": {"kind": "cubic"}}]}
        )
        with pytest.raises(ParseError, match="Unknown cost kind"):
            parse_instance(text)

    def test_validation_errors_pass_through(self):
        """Grid validation errors are raised as themselves, not as ParseError."""
        with pytest.raises(NetSupplyNonzero):
            parse_instance('{"L": 1, "T": 2, "supplies": [[1, 0]]}')

    def test_unknown_arc(self):
        """A diagonal arc with no capacity or cost is still rejected."""
        text = json.dumps({"L": 2, "T": 2, "supplies": [[0, 0], [0, 0]], "arcs": [{"from": [1, 1], "to": [2, 2]}]})
        with pytest.raises(UnknownArc) as excinfo:
            parse_instance(text)
        assert excinfo.value.arc == Arc((1, 1), (2, 2))

    def test_reversed_arc_with_capacity(self):
        text = json.dumps(
            {"L": 1, "T": 2, "supplies": [[0, 0]], "arcs": [{"from": [1, 2], "to": [1, 1], "capacity": 3}]}
        )
        with pytest.raises(UnknownArc):
            parse_instance(text)

    def test_opaque_evaluator_by_name(self):
        text = json.dumps(
            {
                "L": 1,
                "T": 2,
                "supplies": [[2, -2]],
                "arcs": [{"from": [1, 1], "to": [1, 2], "cost": {"kind": "opaque", "params": {"name": "sqrt"}}}],
            }
        )
        grid = parse_instance(text, evaluators={"sqrt": lambda x: x**0.5})
        assert grid.cost(Arc((1, 1), (1, 2)))(4) == pytest.approx(2.0)

    def test_unreadable_file(self, tmp_path):
        with pytest.raises(ParseError, match="cannot read file"):
            load_instance(tmp_path / "missing.json")


class TestDumpInstance:
    def test_only_non_default_arcs(self, i1):
        """An all-default grid dumps no arc entries."""
        assert dump_instance(i1)["arcs"] == []

    def test_write_and_load(self, tmp_path):
        grid = build_grid(
            2, 2, [[5, 0], [-2, -3]], {"v1,1->v2,1": 3}, {"v1,1->v1,2": FixedChargeCost(4, 1)}
        )
        path = write_instance(grid, tmp_path / "sub" / "grid.json")
        loaded = load_instance(path)
        assert loaded.supplies == grid.supplies
        assert loaded.capacity(Arc((1, 1), (2, 1))) == 3
        assert loaded.cost(Arc((1, 1), (1, 2))) == FixedChargeCost(4, 1)
        assert fingerprint(loaded) == fingerprint(grid)

    def test_opaque_cost_cannot_be_written(self):
        grid = build_grid(1, 2, [[1, -1]], costs={"v1,1->v1,2": OpaqueCost(lambda x: x, "id")})
        with pytest.raises(ValueError, match="Opaque"):
            dump_instance(grid)


class TestFingerprint:
    def test_format(self, i1):
        assert re.fullmatch(r"[0-9a-f]{16}:2x2", fingerprint(i1))

    def test_sensitive_to_costs(self, i1, i1_linear):
        assert fingerprint(i1) != fingerprint(i1_linear)

    def test_stable(self, i1):
        """Equal grids built separately share a fingerprint."""
        assert fingerprint(i1) == fingerprint(build_grid(2, 2, [[5, 0], [-2, -3]]))


class TestFlowFiles:
    def test_write_and_load(self, tmp_path, i1, i1_flow_top):
        flow = FlowAssignment.from_mapping(i1, i1_flow_top)
        path = write_flow(i1, flow, tmp_path / "flow.json")
        assert load_flow(i1, path) == flow

    def test_dump_lists_every_arc(self, i1):
        entries = dump_flow(i1, FlowAssignment.zero(i1))["flow"]
        assert [e["arc"] for e in entries] == [str(a) for a in i1.arcs()]

    def test_compact_and_vertex_forms(self, i1):
        """Entries may name the arc by id or by its end vertices; unlisted arcs are zero."""
        text = json.dumps({"flow": [{"arc": "v11->v12", "value": 3}, {"from": [1, 2], "to": [2, 2], "value": 3}]})
        flow = parse_flow(i1, text)
        assert flow[Arc((1, 1), (1, 2))] == 3
        assert flow[Arc((1, 2), (2, 2))] == 3
        assert flow[Arc((1, 1), (2, 1))] == 0

    def test_missing_flow_list(self, i1):
        with pytest.raises(ParseError, match="'flow' list"):
            parse_flow(i1, '{"arcs": []}')

    def test_bad_arc_id(self, i1):
        with pytest.raises(ParseError, match="flow\\[0\\]"):
            parse_flow(i1, '{"flow": [{"arc": "x->y", "value": 1}]}')

    def test_bad_entry_reports_its_line(self, i1):
        text = '{"flow": [\n  {"arc": "v1,1->v1,2", "value": 3},\n  {"arc": "x->y", "value": 1}\n]}'
        with pytest.raises(ParseError, match="flow\\[1\\]") as excinfo:
            parse_flow(i1, text)
        assert excinfo.value.line == 3

    def test_non_numeric_value(self, i1):
        with pytest.raises(ParseError, match="must be a number"):
            parse_flow(i1, '{"flow": [{"arc": "v1,1->v1,2", "value": "3"}]}')

    def test_arc_outside_grid(self, i1):
        """A well-formed id for an arc the grid lacks is rejected."""
        with pytest.raises(UnknownArc):
            parse_flow(i1, '{"flow": [{"arc": "v1,2->v1,3", "value": 1}]}')
