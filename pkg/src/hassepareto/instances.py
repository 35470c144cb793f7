"""Instance families: chains, square grids, seeded signatures, bundled files."""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from typing import Literal

import numpy as np

from .hasse import Instance, Signature


@dataclass(frozen=True)
class InstanceSpec:
    family: Literal["chain", "grid", "explicit"]
    rows: int = 1
    cols: int = 1
    p: float = 0.5
    seed: int | None = None
    maximize: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        if self.rows < 1 or self.cols < 1:
            raise ValueError("sizes must be >= 1")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("p must lie in [0, 1]")

    @property
    def n(self) -> int:
        return self.cols if self.family == "chain" else self.rows * self.cols

    def build(self, constraints: tuple[tuple[int, int], ...] = ()) -> Instance:
        if self.family == "chain":
            cons = make_chain(self.n)
        elif self.family == "grid":
            cons = make_grid(self.rows, self.cols)
        else:
            cons = list(constraints)
        if self.maximize is not None:
            mx = self.maximize
        else:
            mx = tuple(sorted(random_signature(self.n, self.p, self.seed or 0).ascending))
        return Instance(self.n, mx, tuple(cons))


def make_chain(n: int) -> list[tuple[int, int]]:
    """``x_1 >= x_2 >= ... >= x_n``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return [(i, i + 1) for i in range(1, n)]


def make_grid(rows: int, cols: int) -> list[tuple[int, int]]:
    """Product order on a ``rows x cols`` grid, variables numbered row-major.

    Each cell dominates its neighbour below and its neighbour to the right.
    """
    if rows < 1 or cols < 1:
        raise ValueError("rows and cols must be >= 1")
    out = []
    for r in range(rows):
        for c in range(cols):
            i = r * cols + c + 1
            if r + 1 < rows:
                out.append((i, i + cols))
            if c + 1 < cols:
                out.append((i, i + 1))
    return sorted(out)


def random_signature(n: int, p: float, seed: int | tuple[int, ...]) -> Signature:
    """Each index maximized independently with probability ``p``."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    rng = np.random.default_rng(seed)
    draws = rng.random(n)
    return Signature(n, frozenset(int(i) + 1 for i in np.flatnonzero(draws < p)))


def grid_instance(rows: int, cols: int, maximize) -> Instance:
    return Instance(rows * cols, tuple(maximize), tuple(make_grid(rows, cols)))


def chain_instance(n: int, maximize) -> Instance:
    return Instance(n, tuple(maximize), tuple(make_chain(n)))


def load_bundled(name: str) -> Instance:
    text = resources.files("hassepareto.data").joinpath(f"{name}.json").read_text()
    return Instance.from_json(text)


def fig4_instance() -> Instance:
    """5x5 signal grid with three stress patches (maximized cells)."""
    return load_bundled("fig4")


def random_dag_instance(n: int, edge_p: float, seed: int | tuple[int, ...], p: float = 0.5) -> Instance:
    """Random partial order: ``i >= j`` for ``i < j`` with probability
    ``edge_p`` in a hidden order, then indices shuffled; objectives drawn
    as in :func:`random_signature`."""
    rng = np.random.default_rng(seed)
    perm = rng.permutation(n) + 1
    cons = [
        (int(perm[i]), int(perm[j]))
        for i in range(n)
        for j in range(i + 1, n)
        if rng.random() < edge_p
    ]
    mx = tuple(int(i) + 1 for i in np.flatnonzero(rng.random(n) < p))
    return Instance(n, mx, tuple(sorted(cons)))


def random_corpus(count: int, max_n: int, seed: int = 0) -> list[Instance]:
    """Deterministic mixed corpus of random DAG instances with ``2 <= n <= max_n``."""
    rng = np.random.default_rng(seed)
    out = []
    for k in range(count):
        n = int(rng.integers(2, max_n + 1))
        edge_p = float(rng.uniform(0.15, 0.6))
        out.append(random_dag_instance(n, edge_p, (seed, k)))
    return out


def random_series_parallel_instance(n: int, seed: int | tuple[int, ...], p: float = 0.5) -> Instance:
    """Random series-parallel order on ``1..n``.

    The shuffled index list is split recursively; each split is composed in
    series (every element of the left part dominates every element of the
    right part) or in parallel, with equal probability.
    """
    rng = np.random.default_rng(seed)
    idx = [int(i) + 1 for i in rng.permutation(n)]
    cons: set[tuple[int, int]] = set()
    stack = [idx]
    while stack:
        part = stack.pop()
        if len(part) < 2:
            continue
        cut = int(rng.integers(1, len(part)))
        left, right = part[:cut], part[cut:]
        if rng.random() < 0.5:
            cons.update((a, b) for a in left for b in right)
        stack.extend([left, right])
    mx = tuple(int(i) + 1 for i in np.flatnonzero(rng.random(n) < p))
    return Instance(n, mx, tuple(sorted(cons)))


def fence_instance() -> Instance:
    """The N-shaped order ``x1 >= x3, x2 >= x3, x2 >= x4`` with 3, 4 maximized."""
    return Instance(4, (3, 4), ((1, 3), (2, 3), (2, 4)))


def chained_tov_instance(k: int) -> Instance:
    """``k`` two-way hubs strung along ``k + 1`` conflicting pairs.

    Pair ``j`` is ``x_{2j+1} >= x_{2j+2}`` with the lower one maximized, so
    it collapses to one trade-off vertex.  Hub ``g`` is a minimized variable
    above pairs ``g`` and ``g + 1``; it settles on whichever of the two is
    larger, which gives ``2**k`` faces.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    cons = [(2 * j + 1, 2 * j + 2) for j in range(k + 1)]
    mx = tuple(2 * j + 2 for j in range(k + 1))
    base = 2 * (k + 1)
    for g in range(k):
        hub = base + g + 1
        cons += [(hub, 2 * g + 1), (hub, 2 * g + 3)]
    return Instance(base + k, mx, tuple(sorted(cons)))
