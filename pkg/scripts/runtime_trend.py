#!/usr/bin/env python3
"""Growth-trend smoke run: solve time against T at a fixed number of rows.

Usage:
    uv run python scripts/runtime_trend.py --model random-umfg --rows 2 --columns 4,8,16,32
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from gridflow.sampling import SAMPLERS, sample_instance  # noqa: E402
from gridflow.solver.pipeline import solve  # noqa: E402


def parse_args() -> argparse.Namespace:
    parser = argparse.ArgumentParser()
    parser.add_argument("--model", default="random-umfg", choices=SAMPLERS)
    parser.add_argument("--rows", type=int, default=2)
    parser.add_argument("--columns", default="4,8,12,16", help="Comma-separated T values.")
    parser.add_argument("--k", type=int, default=1)
    parser.add_argument("--repeats", type=int, default=3, help="Instances per T; the median time is kept.")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--max-slope", type=float, default=10.0, help="Exit 1 when the fitted slope exceeds this.")
    return parser.parse_args()


def main() -> int:
    args = parse_args()
    columns = [int(part) for part in args.columns.split(",") if part.strip()]
    if len(columns) < 2:
        print("[trend] need at least two T values", file=sys.stderr)
        return 2
    rng = np.random.default_rng(args.seed)

    rows = []
    for T in columns:
        times = []
        for _ in range(args.repeats):
            grid = sample_instance(args.model, rng, L=args.rows, T=T, K=args.k)
            started = time.perf_counter()
            result = solve(grid)
            times.append(time.perf_counter() - started)
        median = float(np.median(times))
        rows.append({"T": T, "seconds": round(median, 6), "case": result.case.label})
        print(f"[trend] T={T:>4}  {median:.4f}s  {result.case.label}", file=sys.stderr)

    ts = np.log([r["T"] for r in rows])
    secs = np.log([max(r["seconds"], 1e-6) for r in rows])
    slope = float(np.polyfit(ts, secs, 1)[0])
    summary = {"model": args.model, "L": args.rows, "runs": rows, "log_log_slope": round(slope, 3)}
    sys.stdout.write(json.dumps(summary, indent=2) + "\n")
    return 0 if slope <= args.max_slope else 1


if __name__ == "__main__":
    raise SystemExit(main())
