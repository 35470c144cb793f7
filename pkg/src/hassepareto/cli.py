"""Command-line entry point: solve, oracle, decompose, bench, screen.

Exit codes: 0 success, 1 verification failure, 2 input error,
3 budget or cap refusal.
"""

from __future__ import annotations

import argparse
import csv
import sys
import time
from collections import Counter
from dataclasses import dataclass, replace
from pathlib import Path
from statistics import mean

from .decomposition import solve_by_decomposition
from .hasse import Instance, InstanceError, Signature
from .instances import grid_instance, make_chain, make_grid, random_signature
from .oracle import DEFAULT_BUDGET, BudgetExceeded, verify_front
from .solver import Aggregate, Binding, ParetoFace, faces_to_json, solve_basic, solve_improved

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_REFUSED = 0, 1, 2, 3

BENCH_COLUMNS = [
    "family", "size", "n", "instance", "seed", "wall_time_s",
    "nodes", "branchings", "n_faces", "time_per_face_s",
]
SCREEN_COLUMNS = ["bitmask", "n_faces", "max_dimension", "dead_branches"]


@dataclass
class BenchRecord:
    family: str
    size: int
    n: int
    instance: int
    seed: int
    wall_time_s: float
    nodes: int
    branchings: int
    n_faces: int

    @property
    def time_per_face_s(self) -> float:
        return self.wall_time_s / self.n_faces if self.n_faces else float("nan")

    def row(self) -> list:
        return [
            self.family, self.size, self.n, self.instance, self.seed,
            f"{self.wall_time_s:.6g}", self.nodes, self.branchings, self.n_faces,
            f"{self.time_per_face_s:.6g}",
        ]


@dataclass(frozen=True)
class ScreenRecord:
    bitmask: int
    n_faces: int
    max_dimension: int
    dead_branches: int = 0


def _load(path: str) -> Instance:
    try:
        return Instance.load(path)
    except OSError as exc:
        raise InstanceError(f"{path}: {exc.strerror}") from exc


def _summary(faces) -> str:
    dims = ",".join(str(f.dimension) for f in sorted(faces, key=lambda f: f.dimension))
    return f"{len(faces)} faces, dims {dims}"


def cmd_solve(args) -> int:
    inst = _load(args.input)
    h = inst.diagram()
    solve = solve_basic if args.algorithm == "basic" else solve_improved
    front = solve(h, keep_tree=args.dot_tree is not None)
    Path(args.output).write_text(faces_to_json(front.faces))
    if args.dot_diagram:
        Path(args.dot_diagram).write_text(h.to_dot())
    if args.dot_tree:
        Path(args.dot_tree).write_text(front.tree.to_dot())
    print(_summary(front.faces))
    return EXIT_OK


def corrupt(face: ParetoFace) -> ParetoFace:
    """Negative control: flip the binding of the first aggregate."""
    first, rest = face.aggregates[0], face.aggregates[1:]
    if first.binding is Binding.FREE:
        flipped = Aggregate(first.indices, Binding.ZERO)
        cons = tuple(c for c in face.param_constraints if first.param not in c)
        return ParetoFace(tuple(sorted((flipped,) + rest)), cons)
    other = Binding.ONE if first.binding is Binding.ZERO else Binding.ZERO
    return replace(face, aggregates=tuple(sorted((Aggregate(first.indices, other),) + rest)))


def cmd_oracle(args) -> int:
    inst = _load(args.input)
    faces = list(solve_improved(inst.diagram(), keep_tree=False).faces)
    if args.corrupt and faces:
        faces[0] = corrupt(faces[0])
    try:
        report = verify_front(inst, faces, k=args.steps, budget=args.budget)
    except BudgetExceeded as exc:
        print(f"REFUSED: {exc}")
        return EXIT_REFUSED
    sys.stdout.write(report.text())
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_decompose(args) -> int:
    inst = _load(args.input)
    front = solve_by_decomposition(inst.diagram())
    Path(args.output).write_text(front.to_json())
    if args.expanded:
        Path(args.expanded).write_text(faces_to_json(front.expand()))
    print(
        f"{len(front.resolutions)} interface resolutions, "
        f"{front.n_leaves} stored leaves, {front.n_terms} product terms"
    )
    return EXIT_OK


def parse_sizes(text: str) -> list[int]:
    """``A..B[:STEP]`` or a comma list."""
    if ".." in text:
        lo, _, rest = text.partition("..")
        hi, _, step = rest.partition(":")
        return list(range(int(lo), int(hi) + 1, int(step) if step else 1))
    return [int(s) for s in text.split(",")]


def bench_instance(family: str, size: int, index: int, p: float, seed: int) -> Instance:
    n = size if family == "chain" else size * size
    sig = random_signature(n, p, (seed, size, index))
    cons = make_chain(n) if family == "chain" else make_grid(size, size)
    return Instance(n, tuple(sorted(sig.ascending)), tuple(cons))


def run_bench(
    family: str, sizes, instances: int, p: float, seed: int, repeat: int = 1
) -> list[BenchRecord]:
    """Solve each instance ``repeat`` times and keep the fastest wall time."""
    out = []
    for size in sizes:
        for k in range(instances):
            inst = bench_instance(family, size, k, p, seed)
            h = inst.diagram()
            dt = float("inf")
            for _ in range(repeat):
                t0 = time.perf_counter()
                front = solve_improved(h, keep_tree=False)
                dt = min(dt, time.perf_counter() - t0)
            s = front.stats
            out.append(BenchRecord(family, size, inst.n, k, seed, dt, s.nodes, s.branchings, s.faces))
    return out


def cmd_bench(args) -> int:
    records = run_bench(
        args.family, parse_sizes(args.sizes), args.instances, args.p, args.seed, args.repeat
    )
    with open(args.csv, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(BENCH_COLUMNS)
        for r in records:
            w.writerow(r.row())
    print("size  n  mean_time_s  mean_faces  mean_time_per_face_s")
    for size in sorted({r.size for r in records}):
        rs = [r for r in records if r.size == size]
        print(
            f"{size} {rs[0].n} {mean(r.wall_time_s for r in rs):.3e} "
            f"{mean(r.n_faces for r in rs):.2f} {mean(r.time_per_face_s for r in rs):.3e}"
        )
    return EXIT_OK


def _screen_one(job: tuple[int, int, int]) -> ScreenRecord:
    rows, cols, mask = job
    n = rows * cols
    inst = grid_instance(rows, cols, Signature.from_mask(n, mask).ascending)
    front = solve_improved(inst.diagram(), keep_tree=False)
    return ScreenRecord(mask, front.n_faces, front.max_dimension, front.stats.dead_branches)


def run_screen(rows: int, cols: int, workers: int = 1) -> list[ScreenRecord]:
    jobs = [(rows, cols, m) for m in range(1 << (rows * cols))]
    if workers > 1:
        from multiprocessing import Pool

        with Pool(workers) as pool:
            recs = pool.map(_screen_one, jobs, chunksize=512)
    else:
        recs = [_screen_one(j) for j in jobs]
    return sorted(recs, key=lambda r: r.bitmask)


def screen_tables(records) -> tuple[Counter, Counter, Counter]:
    dims = Counter(r.max_dimension for r in records)
    faces = Counter(r.n_faces for r in records)
    joint = Counter((r.max_dimension, r.n_faces) for r in records)
    return dims, faces, joint


def _write_csv(path: Path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def cmd_screen(args) -> int:
    n = args.rows * args.cols
    if n > args.cap:
        print(f"REFUSED: {args.rows}x{args.cols} = {n} variables exceeds cap {args.cap}")
        return EXIT_REFUSED
    records = run_screen(args.rows, args.cols, args.workers)
    out = Path(args.csv)
    _write_csv(out, SCREEN_COLUMNS, [(r.bitmask, r.n_faces, r.max_dimension, r.dead_branches) for r in records])
    dims, faces, joint = screen_tables(records)
    stem = out.with_suffix("")
    _write_csv(Path(f"{stem}_dimension_hist.csv"), ["max_dimension", "count"], sorted(dims.items()))
    _write_csv(Path(f"{stem}_faces_hist.csv"), ["n_faces", "count"], sorted(faces.items()))
    fcols = sorted(faces)
    _write_csv(
        Path(f"{stem}_bivariate.csv"),
        ["max_dimension"] + [f"faces_{f}" for f in fcols],
        [[d] + [joint[(d, f)] for f in fcols] for d in sorted(dims)],
    )
    print(f"{len(records)} signatures; max dimension {max(dims)}; max faces {max(faces)}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hassepareto", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="compute the faces of an instance")
    s.add_argument("--input", required=True)
    s.add_argument("--algorithm", choices=["basic", "improved"], default="improved")
    s.add_argument("--output", required=True)
    s.add_argument("--dot-diagram")
    s.add_argument("--dot-tree")
    s.set_defaults(func=cmd_solve)

    o = sub.add_parser("oracle", help="check the improved solver against the lattice oracle")
    o.add_argument("--input", required=True)
    o.add_argument("--steps", type=int, default=10)
    o.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    o.add_argument("--corrupt", action="store_true", help="flip a binding before checking")
    o.set_defaults(func=cmd_oracle)

    d = sub.add_parser("decompose", help="product-form front via interface resolution")
    d.add_argument("--input", required=True)
    d.add_argument("--output", required=True)
    d.add_argument("--expanded", help="also write the expanded faces file")
    d.set_defaults(func=cmd_decompose)

    b = sub.add_parser("bench", help="timing runs on chain or square-grid families")
    b.add_argument("--family", choices=["chain", "grid"], required=True)
    b.add_argument("--sizes", required=True, help="A..B[:STEP] or a comma list")
    b.add_argument("--instances", type=int, default=100)
    b.add_argument("--p", type=float, default=0.5)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--repeat", type=int, default=1, help="timing repeats per instance (min kept)")
    b.add_argument("--csv", required=True)
    b.set_defaults(func=cmd_bench)

    c = sub.add_parser("screen", help="solve every signature of a small grid")
    c.add_argument("--rows", type=int, required=True)
    c.add_argument("--cols", type=int, required=True)
    c.add_argument("--csv", required=True)
    c.add_argument("--cap", type=int, default=16)
    c.add_argument("--workers", type=int, default=1)
    c.set_defaults(func=cmd_screen)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except InstanceError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
