"""
JSON instance and flow files.

Instance file::

    {"L": 2, "T": 2, "supplies": [[5, 0], [-2, -3]],
     "arcs": [{"from": [1, 1], "to": [1, 2], "capacity": "inf",
               "cost": {"kind": "linear", "params": {"slope": 1}}}]}

Omitted arcs default to capacity "inf" and cost zero. Flow file::

    {"flow": [{"arc": "v1,1->v1,2", "value": 3}, ...]}
"""

from __future__ import annotations

import hashlib
import json
import logging
import re
from pathlib import Path
from typing import Any, Callable, Mapping, Optional, Union

from ..config import SolverSettings
from ..errors import InvalidInstanceError, ParseError
from .costs import ZERO, Number, OpaqueCost, cost_from_dict
from .flow import FlowAssignment
from .grid import UNBOUNDED, Arc, GridSpec, build_grid, is_finite

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def _load_json(text: str, path: Optional[str]) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno, path=path) from exc


def _read(path: PathLike) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read file: {exc.strerror or exc}", path=str(path)) from exc


def _line_at(text: str, pos: int) -> int:
    return text.count("\n", 0, pos) + 1


def _object_line(text: str) -> int:
    """Line where the top-level value starts."""
    return _line_at(text, len(text) - len(text.lstrip()))


def _key_line(text: str, key: str) -> Optional[int]:
    match = re.search(rf'"{re.escape(key)}"\s*:', text)
    return _line_at(text, match.start()) if match else None


_SEPARATORS = re.compile(r"[\s,]*")


def _element_lines(text: str, key: str) -> list[int]:
    """Start line of every element of the list stored under ``key``."""
    match = re.search(rf'"{re.escape(key)}"\s*:\s*\[', text)
    if not match:
        return []
    decoder = json.JSONDecoder()
    lines: list[int] = []
    pos = match.end()
    while True:
        pos = _SEPARATORS.match(text, pos).end()
        if pos >= len(text) or text[pos] == "]":
            return lines
        lines.append(_line_at(text, pos))
        try:
            _, pos = decoder.raw_decode(text, pos)
        except json.JSONDecodeError:
            return lines


def _nth(lines: list[int], index: int) -> Optional[int]:
    return lines[index] if index < len(lines) else None


def _vertex(value: Any, what: str, path: Optional[str], line: Optional[int] = None) -> tuple[int, int]:
    if (
        not isinstance(value, (list, tuple))
        or len(value) != 2
        or not all(isinstance(v, int) and not isinstance(v, bool) for v in value)
    ):
        raise ParseError(f"{what} must be a [row, column] pair of integers, got {value!r}", line=line, path=path)
    return int(value[0]), int(value[1])


# ==================== Instances ====================


def parse_instance(
    text: str,
    *,
    path: Optional[str] = None,
    evaluators: Optional[Mapping[str, Callable[[Number], Number]]] = None,
    settings: Optional[SolverSettings] = None,
) -> GridSpec:
    """Parse an instance document.

    Structural errors carry the line of the offending entry. Every listed arc
    reaches ``build_grid``, so an arc outside the grid raises ``UnknownArc``
    even when the entry sets neither capacity nor cost.
    """
    data = _load_json(text, path)
    if not isinstance(data, dict):
        raise ParseError("instance must be a JSON object", line=_object_line(text), path=path)
    for key in ("L", "T", "supplies"):
        if key not in data:
            raise ParseError(f"missing field {key!r}", line=_object_line(text), path=path)

    capacities: dict[Arc, Any] = {}
    costs: dict[Arc, Any] = {}
    arcs = data.get("arcs") or []
    if not isinstance(arcs, list):
        raise ParseError("'arcs' must be a list", line=_key_line(text, "arcs"), path=path)
    lines = _element_lines(text, "arcs")
    for index, entry in enumerate(arcs):
        line = _nth(lines, index)
        if not isinstance(entry, dict):
            raise ParseError(f"arcs[{index}] must be an object", line=line, path=path)
        arc = Arc(
            _vertex(entry.get("from"), f"arcs[{index}].from", path, line),
            _vertex(entry.get("to"), f"arcs[{index}].to", path, line),
        )
        capacities[arc] = entry.get("capacity", UNBOUNDED)
        if "cost" in entry:
            try:
                costs[arc] = cost_from_dict(entry["cost"], evaluators)
            except ValueError as exc:
                raise ParseError(f"arcs[{index}].cost: {exc}", line=line, path=path) from exc

    try:
        return build_grid(data["L"], data["T"], data["supplies"], capacities, costs, settings=settings)
    except InvalidInstanceError:
        raise
    except (TypeError, ValueError) as exc:
        raise ParseError(str(exc), line=_key_line(text, "supplies"), path=path) from exc


def load_instance(path: PathLike, **kwargs: Any) -> GridSpec:
    grid = parse_instance(_read(path), path=str(path), **kwargs)
    logger.debug("Loaded %r from %s", grid, path)
    return grid


def dump_instance(grid: GridSpec) -> dict[str, Any]:
    """Canonical dict form; only arcs with a non-default capacity or cost are listed."""
    arcs = []
    for arc in grid.arcs():
        cap = grid.capacity(arc)
        cost = grid.cost(arc)
        if not is_finite(cap) and cost is ZERO:
            continue
        if isinstance(cost, OpaqueCost):
            raise ValueError(f"Opaque cost on {arc} cannot be written to a file")
        entry: dict[str, Any] = {"from": list(arc.tail), "to": list(arc.head)}
        entry["capacity"] = cap if is_finite(cap) else "inf"
        entry["cost"] = cost.to_dict()
        arcs.append(entry)
    return {
        "L": grid.L,
        "T": grid.T,
        "supplies": [list(row) for row in grid.supplies],
        "arcs": arcs,
    }


def instance_to_json(grid: GridSpec) -> str:
    return json.dumps(dump_instance(grid), indent=2) + "\n"


def write_instance(grid: GridSpec, path: PathLike) -> Path:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(instance_to_json(grid), encoding="utf-8")
    return target


def fingerprint(grid: GridSpec) -> str:
    """Stable instance id: 16 hex chars of sha256 over the canonical JSON, plus ``:LxT``."""
    canonical = json.dumps(dump_instance(grid), separators=(",", ":"), sort_keys=True)
    digest = hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:16]
    return f"{digest}:{grid.L}x{grid.T}"


# ==================== Flows ====================


def dump_flow(grid: GridSpec, flow: FlowAssignment) -> dict[str, Any]:
    return {"flow": [{"arc": str(arc), "value": flow[arc]} for arc in grid.arcs()]}


def write_flow(grid: GridSpec, flow: FlowAssignment, path: PathLike) -> Path:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(json.dumps(dump_flow(grid, flow), indent=2) + "\n", encoding="utf-8")
    return target


def parse_flow(grid: GridSpec, text: str, *, path: Optional[str] = None) -> FlowAssignment:
    data = _load_json(text, path)
    entries = data.get("flow") if isinstance(data, dict) else None
    if not isinstance(entries, list):
        raise ParseError("flow file must be an object with a 'flow' list", line=_object_line(text), path=path)
    lines = _element_lines(text, "flow")
    values: dict[Arc, Number] = {}
    for index, entry in enumerate(entries):
        line = _nth(lines, index)
        if not isinstance(entry, dict) or "value" not in entry:
            raise ParseError(f"flow[{index}] must have 'arc' and 'value'", line=line, path=path)
        try:
            if "arc" in entry:
                arc = Arc.parse(str(entry["arc"]))
            else:
                arc = Arc(
                    _vertex(entry.get("from"), f"flow[{index}].from", path, line),
                    _vertex(entry.get("to"), f"flow[{index}].to", path, line),
                )
        except ParseError:
            raise
        except ValueError as exc:
            raise ParseError(f"flow[{index}]: {exc}", line=line, path=path) from exc
        value = entry["value"]
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ParseError(f"flow[{index}].value must be a number, got {value!r}", line=line, path=path)
        values[arc] = value
    return FlowAssignment.from_mapping(grid, values)


def load_flow(grid: GridSpec, path: PathLike) -> FlowAssignment:
    return parse_flow(grid, _read(path), path=str(path))
