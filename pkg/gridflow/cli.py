"""
Command-line front end: solve, verify, generate, enumerate, oracle, history.

Reports are JSON with a fixed key order on stdout (or ``--report``); a short
human summary goes to stderr. Exit codes:

    0  success
    2  unreadable or invalid input, bad usage
    3  infeasible instance or flow
    4  no polynomial case applies and brute force is out of budget
    5  instance beyond the brute-force budget
    6  any other solver error
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Optional, Sequence

import numpy as np

from .candidates import candidates_for
from .config import SolverSettings
from .core.classify import classify_instance
from .core.costs import FixedChargeCost, LinearCost, Number
from .core.flow import FlowAssignment, check_flow, evaluate_cost
from .core.grid import GridSpec
from .core.instance_io import fingerprint, instance_to_json, load_flow, load_instance, write_flow
from .errors import (
    BadB,
    GridFlowError,
    InfeasibleFlow,
    InfeasibleInstance,
    InvalidInstanceError,
    OddTotal,
    ParseError,
    TooLarge,
    Unsupported,
)
from .extreme.accessible import accessible_tree_for, classify_vertices, compute_kappa
from .extreme.oracle import brute_force_minimum, enumerate_extreme_points
from .reductions import (
    KnapsackInstance,
    PartitionInstance,
    ReducedInstance,
    knapsack_to_mfg_forward_caps,
    knapsack_to_mfg_sinks_two_rows,
    partition_to_mfg_two_terminal_rows,
    partition_to_mfg_varying_L,
    ulsp_to_mfg,
)
from .runstore import RunStore
from .sampling import SAMPLERS, sample_instance
from .solver.pipeline import solve

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_INFEASIBLE = 3
EXIT_UNSUPPORTED = 4
EXIT_TOO_LARGE = 5
EXIT_SOLVER = 6

REDUCTION_MODELS = ("ulsp", "knapsack-sinks", "knapsack-forward-caps", "partition-staircase", "partition-two-rows")


def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, (ParseError, InvalidInstanceError, BadB, OddTotal)):
        return EXIT_INPUT
    if isinstance(exc, (InfeasibleInstance, InfeasibleFlow)):
        return EXIT_INFEASIBLE
    if isinstance(exc, Unsupported):
        return EXIT_UNSUPPORTED
    if isinstance(exc, TooLarge):
        return EXIT_TOO_LARGE
    return EXIT_SOLVER


@dataclass
class RunReport:
    command: list[str]
    case: Optional[str] = None
    cost: Optional[Number] = None
    flow: Optional[list[dict[str, Any]]] = None
    counts: dict[str, Any] = field(default_factory=dict)
    extra: dict[str, Any] = field(default_factory=dict)
    wall_time: Optional[float] = None

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {"command": self.command}
        if self.case is not None:
            data["case"] = self.case
        if self.cost is not None:
            data["cost"] = self.cost
        if self.flow is not None:
            data["flow"] = self.flow
        if self.counts:
            data["counts"] = self.counts
        data.update(self.extra)
        if self.wall_time is not None:
            data["wall_time"] = round(self.wall_time, 6)
        return data

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def _flow_entries(grid: GridSpec, flow: FlowAssignment) -> list[dict[str, Any]]:
    return [{"arc": str(arc), "value": flow[arc]} for arc in grid.arcs() if flow[arc] != 0]


def _settings(args: argparse.Namespace) -> SolverSettings:
    return SolverSettings.from_env().replace(
        tolerance=getattr(args, "tolerance", None),
        oracle_max_combinations=getattr(args, "budget", None),
        oracle_max_vertices=getattr(args, "max_vertices", None),
        threads=getattr(args, "threads", None),
        db_path=getattr(args, "store", None),
    )


def _emit(report: RunReport, args: argparse.Namespace) -> None:
    text = report.to_json()
    if getattr(args, "report", None):
        Path(args.report).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _record(args: argparse.Namespace, settings: SolverSettings, grid: GridSpec, report: RunReport, code: int) -> None:
    if not settings.db_path:
        return
    with RunStore(settings.db_path) as store:
        fp = fingerprint(grid)
        cost = float(report.cost) if report.cost is not None else None
        store.record_run(fp, args.command, case_tag=report.case or "", cost=cost, exit_code=code)
        if args.command == "solve" and code == EXIT_OK:
            store.save_report(fp, report.to_dict())
            store.evict_old_reports()


# ==================== Commands ====================


def cmd_solve(args: argparse.Namespace, argv: list[str]) -> int:
    settings = _settings(args)
    grid = load_instance(args.instance, settings=settings)
    started = time.perf_counter()
    result = solve(grid, settings)
    elapsed = time.perf_counter() - started

    report = RunReport(
        command=argv,
        case=result.case.label,
        cost=result.cost,
        flow=_flow_entries(grid, result.flow),
        counts=result.counts,
        wall_time=elapsed if args.timing else None,
    )
    if args.output:
        write_flow(grid, result.flow, args.output)
    _emit(report, args)
    _record(args, settings, grid, report, EXIT_OK)
    print(f"[OK] {result.case.label}: optimal cost {result.cost} ({elapsed:.3f}s)", file=sys.stderr)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace, argv: list[str]) -> int:
    settings = _settings(args)
    grid = load_instance(args.instance, settings=settings)
    flow = load_flow(grid, args.flow)
    verdict = check_flow(grid, flow)
    report = RunReport(command=argv, extra={"feasible": verdict.ok})
    if verdict.ok:
        report.cost = evaluate_cost(grid, flow)
        print(f"[OK] Flow is feasible, cost {report.cost}", file=sys.stderr)
        code = EXIT_OK
    else:
        report.extra["violations"] = [str(v) for v in verdict.violations]
        print(f"[ERROR] Flow is infeasible: {len(verdict.violations)} violation(s)", file=sys.stderr)
        code = EXIT_INFEASIBLE
    _emit(report, args)
    _record(args, settings, grid, report, code)
    return code


def cmd_oracle(args: argparse.Namespace, argv: list[str]) -> int:
    settings = _settings(args)
    grid = load_instance(args.instance, settings=settings)
    best = brute_force_minimum(grid, settings)
    report = RunReport(
        command=argv,
        case="BruteForce",
        cost=best.cost,
        flow=_flow_entries(grid, best.flow),
        counts={"extreme_points": best.extreme_points, "oracle_queries": best.oracle_queries},
    )
    _emit(report, args)
    _record(args, settings, grid, report, EXIT_OK)
    print(f"[OK] {best.extreme_points} extreme point(s), optimum {best.cost}", file=sys.stderr)
    return EXIT_OK


def _tree_entry(grid: GridSpec, flow: FlowAssignment) -> dict[str, Any]:
    try:
        window, tree = accessible_tree_for(grid, flow)
        kappa = compute_kappa(window, tree)
    except GridFlowError as exc:
        return {"error": str(exc)}
    shift = grid.L - window.L

    def name(v: tuple[int, int]) -> str:
        return f"v{v[0] + shift},{v[1]}"

    arcs = sorted(tree.tree_arcs)
    vertex_types = {}
    for arc in arcs:
        types = classify_vertices(window, tree, arc, kappa)
        vertex_types[f"{name(arc.tail)}->{name(arc.head)}"] = {
            name(v): types.labels[v].value for v in window.vertices()
        }
    return {
        "tree_arcs": [f"{name(a.tail)}->{name(a.head)}" for a in arcs],
        "kappa": {name(v): kappa[v] for v in window.vertices()},
        "vertex_types": vertex_types,
    }


def _candidate_entry(grid: GridSpec) -> dict[str, Any]:
    case = classify_instance(grid)
    cvs = candidates_for(grid, case)
    return {
        "case": case.label,
        "provenance": cvs.provenance,
        "rows": [{"row": l, "values": list(cvs.values_for_row(l))} for l in range(1, grid.L + 1)],
    }


def cmd_enumerate(args: argparse.Namespace, argv: list[str]) -> int:
    """Print the per-row candidate sets; ``--extreme-points`` adds the oracle listing."""
    settings = _settings(args)
    grid = load_instance(args.instance, settings=settings)
    report = RunReport(command=argv)
    listing = args.extreme_points or args.trees
    try:
        candidates = _candidate_entry(grid)
    except Unsupported:
        if not listing:
            raise
        logger.warning("No candidate enumerator for this instance; listing extreme points only")
    else:
        report.case = candidates["case"]
        report.counts["candidates"] = sum(len(row["values"]) for row in candidates["rows"])
        report.extra["candidates"] = candidates

    if listing:
        points = enumerate_extreme_points(grid, settings)
        entries = []
        for point in points:
            entry: dict[str, Any] = {"cost": evaluate_cost(grid, point), "flow": _flow_entries(grid, point)}
            if args.trees:
                entry["tree"] = _tree_entry(grid, point)
            entries.append(entry)
        report.counts["extreme_points"] = len(points)
        report.extra["extreme_points"] = entries

    _emit(report, args)
    summary = ", ".join(f"{count} {what.replace('_', ' ')}" for what, count in report.counts.items())
    print(f"[OK] {summary}", file=sys.stderr)
    return EXIT_OK


def _int_list(text: Optional[str], what: str) -> list[int]:
    if not text:
        raise InvalidInstanceError(f"--{what} is required for this model")
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise InvalidInstanceError(f"--{what} must be a comma-separated list of integers") from exc


def _generate_reduction(args: argparse.Namespace) -> tuple[GridSpec, Optional[ReducedInstance]]:
    if args.model == "ulsp":
        demands = _int_list(args.demands, "demands")
        T = len(demands)
        setups = _int_list(args.setups, "setups") if args.setups else [0] * T
        units = _int_list(args.unit_costs, "unit-costs") if args.unit_costs else [0] * T
        holding = _int_list(args.holding_costs, "holding-costs") if args.holding_costs else [0] * (T - 1)
        grid = ulsp_to_mfg(
            demands,
            [FixedChargeCost(s, u) for s, u in zip(setups, units)],
            [LinearCost(h) for h in holding],
        )
        return grid, None
    if args.model.startswith("knapsack"):
        kp = KnapsackInstance(
            _int_list(args.values, "values"),
            _int_list(args.costs, "costs"),
            args.knapsack_budget,
            args.target,
        )
        if args.model == "knapsack-sinks":
            reduced = knapsack_to_mfg_sinks_two_rows(kp, args.down_capacity)
        else:
            reduced = knapsack_to_mfg_forward_caps(kp)
        return reduced.grid, reduced
    pp = PartitionInstance(_int_list(args.values, "values"))
    if args.model == "partition-staircase":
        reduced = partition_to_mfg_varying_L(pp)
    else:
        reduced = partition_to_mfg_two_terminal_rows(pp)
    return reduced.grid, reduced


def cmd_generate(args: argparse.Namespace, argv: list[str]) -> int:
    reduced: Optional[ReducedInstance] = None
    if args.model in SAMPLERS:
        rng = np.random.default_rng(args.seed)
        grid = sample_instance(
            args.model, rng, L=args.rows, T=args.columns, K=args.k, source_row=args.source_row
        )
    else:
        grid, reduced = _generate_reduction(args)

    text = instance_to_json(grid)
    if args.output:
        target = Path(args.output)
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(text, encoding="utf-8")
        if reduced is not None:
            sidecar = target.with_name(target.name + ".certificate.json")
            payload = {"model": args.model, "big_m": reduced.big_m, **reduced.certificate.to_dict()}
            sidecar.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
        print(f"[OK] Wrote {grid.L}x{grid.T} instance to {target}", file=sys.stderr)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_history(args: argparse.Namespace, argv: list[str]) -> int:
    settings = _settings(args)
    with RunStore(settings.db_path) as store:
        if args.show:
            cached = store.load_report(args.show)
            if cached is None:
                print(f"[WARN] No cached report for {args.show}", file=sys.stderr)
                return EXIT_INPUT
            sys.stdout.write(json.dumps(cached, indent=2) + "\n")
            return EXIT_OK
        runs = store.list_runs(limit=args.limit)
    sys.stdout.write(json.dumps({"runs": runs}, indent=2) + "\n")
    return EXIT_OK


# ==================== Parser ====================


def _add_solver_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--tolerance", type=float, help="Cost comparison tolerance (default 1e-9).")
    parser.add_argument("--budget", type=int, help="Brute-force cap on tree/bound combinations.")
    parser.add_argument("--max-vertices", type=int, help="Brute-force cap on L*T.")
    parser.add_argument("--threads", type=int, help="Worker threads for state-graph pricing (default 1).")
    parser.add_argument("--report", help="Write the JSON report here instead of stdout.")
    parser.add_argument("--store", help="Record the run in this SQLite ledger.")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gridflow", description="Minimum concave cost flows on grid graphs.")
    parser.add_argument("--verbose", "-v", action="store_true", help="Log debug output to stderr.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="Solve an instance to optimality.")
    p.add_argument("instance")
    p.add_argument("--output", help="Write the optimal flow file here.")
    p.add_argument("--timing", action="store_true", help="Include wall time in the report.")
    _add_solver_flags(p)

    p = sub.add_parser("verify", help="Check a flow against an instance and price it.")
    p.add_argument("instance")
    p.add_argument("flow")
    _add_solver_flags(p)

    p = sub.add_parser("oracle", help="Brute-force optimum over all extreme points.")
    p.add_argument("instance")
    _add_solver_flags(p)

    p = sub.add_parser("enumerate", help="Print the candidate forward-arc values of each row.")
    p.add_argument("instance")
    p.add_argument("--extreme-points", action="store_true", help="Also list every extreme point with its cost.")
    p.add_argument(
        "--trees", action="store_true", help="List extreme points with their accessible tree and vertex types."
    )
    _add_solver_flags(p)

    p = sub.add_parser("generate", help="Write a generated instance.")
    p.add_argument("--model", required=True, choices=REDUCTION_MODELS + SAMPLERS)
    p.add_argument("--output", help="Instance file; a certificate sidecar is written next to it.")
    p.add_argument("--seed", type=int, default=0, help="Seed for the random-* models.")
    p.add_argument("--rows", type=int, default=2)
    p.add_argument("--columns", type=int, default=3)
    p.add_argument("--k", type=int, default=1, help="Distinct capacity values for random-cmfg/random-tworow.")
    p.add_argument("--source-row", type=int, default=1)
    p.add_argument("--demands")
    p.add_argument("--setups")
    p.add_argument("--unit-costs")
    p.add_argument("--holding-costs")
    p.add_argument("--values")
    p.add_argument("--costs")
    p.add_argument("--knapsack-budget", type=int, default=0)
    p.add_argument("--target", type=int, default=0)
    p.add_argument("--down-capacity", type=int, help="Uniform downward capacity for knapsack-sinks (default max value).")

    p = sub.add_parser("history", help="List recorded runs.")
    p.add_argument("--limit", type=int, default=20)
    p.add_argument("--show", metavar="FINGERPRINT", help="Print the cached report of an instance.")
    p.add_argument("--store", help="Ledger location (default GRIDFLOW_DB_PATH or the platform data dir).")
    return parser


COMMANDS: dict[str, Callable[[argparse.Namespace, list[str]], int]] = {
    "solve": cmd_solve,
    "verify": cmd_verify,
    "oracle": cmd_oracle,
    "enumerate": cmd_enumerate,
    "generate": cmd_generate,
    "history": cmd_history,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return COMMANDS[args.command](args, argv)
    except GridFlowError as exc:
        code = exit_code_for(exc)
        print(f"[ERROR] {exc}", file=sys.stderr)
        return code
    except (OSError, ValueError) as exc:
        print(f"[ERROR] {exc}", file=sys.stderr)
        return EXIT_INPUT
