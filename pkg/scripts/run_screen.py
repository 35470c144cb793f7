"""Exhaustive signature screen of a small grid plus oracle spot checks.

    python3 scripts/run_screen.py --rows 4 --cols 4 --out results/
"""

from __future__ import annotations

import argparse
import time
from pathlib import Path

import numpy as np

from hassepareto.cli import main as cli_main
from hassepareto.hasse import Signature
from hassepareto.instances import grid_instance
from hassepareto.oracle import verify_front
from hassepareto.solver import solve_improved


def spot_checks(rows: int, cols: int, count: int, k: int, seed: int) -> int:
    n = rows * cols
    rng = np.random.default_rng(seed)
    failed = 0
    for mask in rng.choice(1 << n, size=min(count, 1 << n), replace=False):
        inst = grid_instance(rows, cols, Signature.from_mask(n, int(mask)).ascending)
        report = verify_front(inst, solve_improved(inst.diagram(), keep_tree=False), k=k)
        failed += not report.passed
    return failed


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--rows", type=int, default=4)
    ap.add_argument("--cols", type=int, default=4)
    ap.add_argument("--out", default="results")
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--spot", type=int, default=50, help="oracle checks on 3x3 signatures")
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    t0 = time.perf_counter()
    csv_path = out / f"screen_{args.rows}x{args.cols}.csv"
    status = cli_main([
        "screen", "--rows", str(args.rows), "--cols", str(args.cols),
        "--csv", str(csv_path), "--workers", str(args.workers),
    ])
    print(f"screen exit {status} in {time.perf_counter() - t0:.1f}s -> {csv_path}")
    if args.spot:
        print(f"3x3 oracle spot checks failed: {spot_checks(3, 3, args.spot, 9, 7)}/{args.spot}")


if __name__ == "__main__":
    main()
