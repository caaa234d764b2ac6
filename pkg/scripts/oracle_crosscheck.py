#!/usr/bin/env python3
"""Batch cross-check of the state-graph solver against brute-force enumeration.

Usage:
    uv run python scripts/oracle_crosscheck.py --model random-cmfg --rows 3 --columns 3 --count 200
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from gridflow.core.instance_io import fingerprint, write_instance  # noqa: E402
from gridflow.extreme.oracle import brute_force_minimum  # noqa: E402
from gridflow.sampling import SAMPLERS, sample_instance  # noqa: E402
from gridflow.solver.pipeline import solve  # noqa: E402


def parse_args() -> argparse.Namespace:
    parser = argparse.ArgumentParser()
    parser.add_argument("--model", default="random-umfg", choices=SAMPLERS)
    parser.add_argument("--rows", type=int, default=2)
    parser.add_argument("--columns", type=int, default=4)
    parser.add_argument("--k", type=int, default=1)
    parser.add_argument("--count", type=int, default=100)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--tolerance", type=float, default=1e-9)
    parser.add_argument(
        "--save-mismatches",
        default=None,
        help="Directory to write mismatching instances into.",
    )
    return parser.parse_args()


def main() -> int:
    args = parse_args()
    rng = np.random.default_rng(args.seed)
    out_dir = Path(args.save_mismatches) if args.save_mismatches else None

    mismatches = []
    cases: dict[str, int] = {}
    for i in range(args.count):
        grid = sample_instance(args.model, rng, L=args.rows, T=args.columns, K=args.k)
        result = solve(grid)
        best = brute_force_minimum(grid)
        cases[str(result.tag)] = cases.get(str(result.tag), 0) + 1
        if abs(result.cost - best.cost) > args.tolerance * max(1.0, abs(best.cost)):
            fp = fingerprint(grid)
            mismatches.append({"index": i, "fingerprint": fp, "solver": result.cost, "oracle": best.cost})
            print(f"[crosscheck] #{i} {fp}: solver {result.cost} vs oracle {best.cost}", file=sys.stderr)
            if out_dir is not None:
                write_instance(grid, out_dir / f"{fp.replace(':', '_')}.json")

    summary = {"model": args.model, "instances": args.count, "cases": cases, "mismatches": mismatches}
    sys.stdout.write(json.dumps(summary, indent=2) + "\n")
    print(f"[crosscheck] {len(mismatches)} mismatch(es) in {args.count} instances", file=sys.stderr)
    return 1 if mismatches else 0


if __name__ == "__main__":
    raise SystemExit(main())
