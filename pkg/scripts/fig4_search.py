"""Search three-rectangle patch placements on the 5x5 grid.

Each placement maximizes the cells of three disjoint rectangles and
minimizes the rest; the script tallies the resulting face-dimension
profiles and lists placements reproducing a target profile.

    python3 scripts/fig4_search.py --target 5,6 --samples 2000
"""

from __future__ import annotations

import argparse
import itertools
import random
from collections import Counter

from hassepareto.instances import fig4_instance, grid_instance
from hassepareto.solver import solve_improved

SIDE = 5


def rectangles(side: int):
    for r0, r1 in itertools.combinations_with_replacement(range(side), 2):
        for c0, c1 in itertools.combinations_with_replacement(range(side), 2):
            yield frozenset(r * side + c + 1 for r in range(r0, r1 + 1) for c in range(c0, c1 + 1))


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--target", default="5,6")
    ap.add_argument("--samples", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    target = sorted(int(x) for x in args.target.split(","))
    rects = list(rectangles(SIDE))
    rng = random.Random(args.seed)
    seen: dict[frozenset, list[int]] = {}
    while len(seen) < args.samples:
        patches = rng.sample(rects, 3)
        if any(a & b for a, b in itertools.combinations(patches, 2)):
            continue
        cells = frozenset().union(*patches)
        if cells in seen:
            continue
        front = solve_improved(grid_instance(SIDE, SIDE, cells).diagram(), keep_tree=False)
        seen[cells] = sorted(f.dimension for f in front.faces)
    profiles = Counter(tuple(v) for v in seen.values())
    print("most common dimension profiles:")
    for prof, count in profiles.most_common(10):
        print(f"  {list(prof)}: {count}")
    hits = [sorted(c) for c, d in seen.items() if d == target]
    print(f"{len(hits)} of {len(seen)} placements give dims {target}")
    bundled = sorted(f.dimension for f in solve_improved(fig4_instance().diagram()).faces)
    print(f"bundled instance: maximize {list(fig4_instance().maximize)} -> dims {bundled}")


if __name__ == "__main__":
    main()
